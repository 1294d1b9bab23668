#include "snf/coeff.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snf/errors.hpp"
#include "snf/parallel.hpp"
#include "snf/rng.hpp"

namespace snf {

double CoefficientMatrix::row_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += (*this)(i, j);
  return s;
}

double CoefficientMatrix::col_sum(int j) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (*this)(i, j);
  return s;
}

double CoefficientMatrix::sum_squares() const {
  BlockSum s;
  for (double x : a) s.add(x * x);
  return s.total();
}

double TauMatrix::row_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += (*this)(i, j);
  return s;
}

std::vector<std::uint64_t> coset_counts(const BooleanFamily& F) {
  int n = F.n();
  std::vector<std::uint64_t> counts((std::size_t)(n * n), 0);
  if (F.is_explicit()) {
    std::uint64_t total = factorial(n);
    int chunks = default_chunks(total);
    std::vector<std::vector<std::uint64_t>> partial((std::size_t)chunks);
    parallel_chunks(total, chunks, [&](int ci, std::uint64_t lo, std::uint64_t hi) {
      std::vector<std::uint64_t> local((std::size_t)(n * n), 0);
      enumerate_permutations(n, lo, hi, [&](PermRank k, const std::vector<int>& im) {
        if (F.contains_rank(k))
          for (int i = 0; i < n; ++i) ++local[(std::size_t)(i * n + im[(std::size_t)i])];
      });
      partial[(std::size_t)ci] = std::move(local);
    });
    for (auto& local : partial)
      for (std::size_t x = 0; x < counts.size(); ++x) counts[x] += local[x];
    return counts;
  }
  // Symbolic closed form, then one pass over the exception lists.
  bool row_axis = F.axis() == BooleanFamily::Axis::Row;
  int line = F.line();
  const auto& cross = F.cross();
  std::vector<char> in_cross((std::size_t)n, 0);
  for (int x : cross) in_cross[(std::size_t)x] = 1;
  std::uint64_t f1 = factorial(n - 1);
  std::uint64_t f2 = n >= 2 ? factorial(n - 2) : 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool on_line = row_axis ? (i == line) : (j == line);
      int other = row_axis ? j : i;
      std::uint64_t base;
      if (on_line) {
        base = in_cross[(std::size_t)other] ? f1 : 0;
      } else {
        base = (cross.size() - (in_cross[(std::size_t)other] ? 1 : 0)) * f2;
      }
      counts[(std::size_t)(i * n + j)] = base;
    }
  }
  for (PermRank k : F.added()) {
    Permutation p = Permutation::unrank(k, n);
    for (int i = 0; i < n; ++i) ++counts[(std::size_t)(i * n + p(i))];
  }
  for (PermRank k : F.removed()) {
    Permutation p = Permutation::unrank(k, n);
    for (int i = 0; i < n; ++i) --counts[(std::size_t)(i * n + p(i))];
  }
  return counts;
}

double evaluate_f1(const CoefficientMatrix& M, const std::vector<int>& images) {
  double s = 0.0;
  for (int i = 0; i < M.n; ++i) s += M.a[(std::size_t)(i * M.n + images[(std::size_t)i])];
  return s;
}

double evaluate_f1(const CoefficientMatrix& M, const Permutation& p) {
  if (p.n() != M.n) throw std::invalid_argument("evaluate_f1: mismatched n");
  return evaluate_f1(M, p.images());
}

namespace {

EpsilonEstimate epsilon_exact(const BooleanFamily& F, const CoefficientMatrix& M) {
  int n = F.n();
  std::uint64_t total = factorial(n);
  int chunks = default_chunks(total);
  std::vector<double> partial((std::size_t)chunks, 0.0);
  parallel_chunks(total, chunks, [&](int ci, std::uint64_t lo, std::uint64_t hi) {
    BlockSum s;
    enumerate_permutations(n, lo, hi, [&](PermRank k, const std::vector<int>& im) {
      double f = F.contains_enumerated(k, im) ? 1.0 : -1.0;
      double d = f - evaluate_f1(M, im);
      s.add(d * d);
    });
    partial[(std::size_t)ci] = s.total();
  });
  EpsilonEstimate e;
  e.value = tree_sum(partial) / (double)total;
  e.kind = EpsilonKind::Exact;
  return e;
}

EpsilonEstimate epsilon_mc(const BooleanFamily& F, const CoefficientMatrix& M,
                           std::uint64_t samples, std::uint64_t seed) {
  int n = F.n();
  int chunks = default_chunks(samples);
  std::vector<double> sums((std::size_t)chunks, 0.0), sqs((std::size_t)chunks, 0.0);
  Rng base(seed, 0x5eedULL);
  parallel_chunks(samples, chunks, [&](int ci, std::uint64_t lo, std::uint64_t hi) {
    Rng rng = base.split((std::uint64_t)ci);
    std::vector<int> im((std::size_t)n);
    BlockSum s, s2;
    for (std::uint64_t it = lo; it < hi; ++it) {
      for (int i = 0; i < n; ++i) im[(std::size_t)i] = i;
      rng.shuffle(im);
      double f = F.contains(im) ? 1.0 : -1.0;
      double d = f - evaluate_f1(M, im);
      s.add(d * d);
      s2.add(d * d * d * d);
    }
    sums[(std::size_t)ci] = s.total();
    sqs[(std::size_t)ci] = s2.total();
  });
  double mean = tree_sum(sums) / (double)samples;
  double m2 = tree_sum(sqs) / (double)samples;
  double var = std::max(0.0, m2 - mean * mean);
  EpsilonEstimate e;
  e.value = mean;
  e.kind = EpsilonKind::MonteCarlo;
  e.stderr_ = std::sqrt(var / (double)samples);
  return e;
}

}  // namespace

EpsilonEstimate distance_to_u1(const BooleanFamily& F, const CoefficientMatrix& M,
                               const MatrixOptions& opts) {
  if (F.n() != M.n) throw std::invalid_argument("distance_to_u1: mismatched n");
  if (F.n() <= kMaxDenseN) return epsilon_exact(F, M);
  return epsilon_mc(F, M, opts.mc_samples, opts.seed);
}

CoefficientMatrix coefficient_matrix(const BooleanFamily& F, const MatrixOptions& opts) {
  int n = F.n();
  CoefficientMatrix M;
  M.n = n;
  M.a.resize((std::size_t)(n * n));
  M.c = F.density();
  auto counts = coset_counts(F);
  double nf = (double)factorial(n);
  double f1 = (double)factorial(n - 1);
  double shift = ((double)(n - 2) / (double)n) * (2.0 * M.c - 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double inner = (2.0 * (double)counts[(std::size_t)(i * n + j)] - f1) / nf;
      M.at(i, j) = (double)(n - 1) * inner - shift;
    }
  }
  EpsilonEstimate e = distance_to_u1(F, M, opts);
  M.epsilon = e.value;
  M.epsilon_kind = e.kind;
  M.epsilon_stderr = e.stderr_;
  return M;
}

IdentityReport verify_identities(const CoefficientMatrix& M) {
  if (M.epsilon_kind != EpsilonKind::Exact)
    throw std::invalid_argument("verify_identities requires an exact epsilon");
  IdentityReport r;
  double target = 2.0 * M.c - 1.0;
  for (int i = 0; i < M.n; ++i)
    r.max_row_violation = std::max(r.max_row_violation, std::fabs(M.row_sum(i) - target));
  for (int j = 0; j < M.n; ++j)
    r.max_col_violation = std::max(r.max_col_violation, std::fabs(M.col_sum(j) - target));
  double expect = (double)(M.n - 1) * (1.0 - M.epsilon) - (double)(M.n - 2) * target * target;
  r.sum_sq_violation = std::fabs(M.sum_squares() - expect);
  for (double x : M.a) {
    r.max_abs_entry = std::max(r.max_abs_entry, std::fabs(x));
    if (std::fabs(x) > 1.0 + 1e-9) ++r.bound_violations;
  }
  return r;
}

TauMatrix tau_matrix(const BooleanFamily& F) {
  TauMatrix T;
  T.n = F.n();
  T.c = F.density();
  auto counts = coset_counts(F);
  double f1 = (double)factorial(F.n() - 1);
  T.tau.resize(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) T.tau[x] = (double)counts[x] / f1;
  return T;
}

TauMatrix tau_from_a(const CoefficientMatrix& M) {
  TauMatrix T;
  T.n = M.n;
  T.c = M.c;
  T.tau.resize(M.a.size());
  double base = (2.0 * (double)(M.n - 2) * M.c + 1.0) / (2.0 * (double)(M.n - 1));
  double scale = (double)M.n / (2.0 * (double)(M.n - 1));
  for (std::size_t x = 0; x < M.a.size(); ++x) T.tau[x] = base + scale * M.a[x];
  return T;
}

// --- U_t projection ---------------------------------------------------------

struct UtProjector::Impl {
  Eigen::LDLT<Eigen::MatrixXd> solver;
  // For t = 2: dense pair index pid[i*n+j] over ordered pairs i != j.
  std::vector<int> pid;
  int pairs = 0;
};

namespace {
constexpr double kRidge = 1e-12;
}

UtProjector::UtProjector(int n, int t) : n_(n), t_(t), impl_(new Impl) {
  if (t < 0 || t > 2) throw std::invalid_argument("UtProjector: t must be 0, 1 or 2");
  if (n < 1 || n > kMaxDenseN) throw CapacityError("UtProjector: n out of range");
  if (t == 2 && n > 7) throw CapacityError("UtProjector: t = 2 requires n <= 7");
  if (t == 0) return;
  double nf = (double)factorial(n);
  if (t == 1) {
    int dim = n * n;
    Eigen::MatrixXd G(dim, dim);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double g;
            if (i == k && j == l)
              g = 1.0 / (double)n;
            else if (i == k || j == l)
              g = 0.0;
            else
              g = 1.0 / ((double)n * (double)(n - 1));
            G(i * n + j, k * n + l) = g;
          }
    G.diagonal().array() += kRidge;
    impl_->solver.compute(G);
    return;
  }
  // t == 2
  impl_->pid.assign((std::size_t)(n * n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) impl_->pid[(std::size_t)(i * n + j)] = next++;
  impl_->pairs = next;
  int P = next;
  int dim = P * P;
  Eigen::MatrixXd G(dim, dim);
  auto pair_of = [&](int p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (impl_->pid[(std::size_t)(i * n + j)] == p) return std::pair<int, int>(i, j);
    return std::pair<int, int>(-1, -1);
  };
  std::vector<std::pair<int, int>> plist((std::size_t)P);
  for (int p = 0; p < P; ++p) plist[(std::size_t)p] = pair_of(p);
  for (int pi = 0; pi < P; ++pi)
    for (int pj = 0; pj < P; ++pj)
      for (int pk = 0; pk < P; ++pk)
        for (int pl = 0; pl < P; ++pl) {
          // constraints: plist[pi].1->plist[pj].1, .2->.2 and same for (pk,pl)
          int src[4] = {plist[(std::size_t)pi].first, plist[(std::size_t)pi].second,
                        plist[(std::size_t)pk].first, plist[(std::size_t)pk].second};
          int dst[4] = {plist[(std::size_t)pj].first, plist[(std::size_t)pj].second,
                        plist[(std::size_t)pl].first, plist[(std::size_t)pl].second};
          bool ok = true;
          int distinct = 4;
          for (int x = 0; x < 4 && ok; ++x)
            for (int y = x + 1; y < 4 && ok; ++y) {
              bool same_src = src[x] == src[y];
              bool same_dst = dst[x] == dst[y];
              if (same_src != same_dst) ok = false;
              if (same_src && same_dst) --distinct;
            }
          double g = 0.0;
          if (ok) g = (double)factorial(n - distinct) / nf;
          G(pi * P + pj, pk * P + pl) = g;
        }
  G.diagonal().array() += kRidge;
  impl_->solver.compute(G);
}

UtProjector::~UtProjector() = default;
UtProjector::UtProjector(UtProjector&&) noexcept = default;

RealFunction UtProjector::project(const RealFunction& f) const {
  if (f.n() != n_) throw std::invalid_argument("project: mismatched n");
  int n = n_;
  double nf = (double)f.domain_size();
  if (t_ == 0) return RealFunction::constant(n, f.mean());
  if (t_ == 1) {
    Eigen::VectorXd b(n * n);
    b.setZero();
    enumerate_permutations(n, [&](PermRank k, const std::vector<int>& im) {
      for (int i = 0; i < n; ++i) b(i * n + im[(std::size_t)i]) += f[k];
    });
    b /= nf;
    Eigen::VectorXd x = impl_->solver.solve(b);
    RealFunction out(n);
    enumerate_permutations(n, [&](PermRank k, const std::vector<int>& im) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += x(i * n + im[(std::size_t)i]);
      out[k] = s;
    });
    return out;
  }
  int P = impl_->pairs;
  const auto& pid = impl_->pid;
  Eigen::VectorXd b(P * P);
  b.setZero();
  enumerate_permutations(n, [&](PermRank k, const std::vector<int>& im) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) {
          int pi = pid[(std::size_t)(i * n + j)];
          int pj = pid[(std::size_t)(im[(std::size_t)i] * n + im[(std::size_t)j])];
          b(pi * P + pj) += f[k];
        }
  });
  b /= nf;
  Eigen::VectorXd x = impl_->solver.solve(b);
  RealFunction out(n);
  enumerate_permutations(n, [&](PermRank k, const std::vector<int>& im) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) {
          int pi = pid[(std::size_t)(i * n + j)];
          int pj = pid[(std::size_t)(im[(std::size_t)i] * n + im[(std::size_t)j])];
          s += x(pi * P + pj);
        }
    out[k] = s;
  });
  return out;
}

RealFunction project_ut(const RealFunction& f, int t) { return UtProjector(f.n(), t).project(f); }

std::optional<int> degree(const RealFunction& f, double tol) {
  if (tol < 0) tol = 1e-6 * f.norm2();
  for (int t = 0; t <= 2; ++t) {
    RealFunction p = project_ut(f, t);
    BlockSum s;
    for (std::uint64_t k = 0; k < f.domain_size(); ++k) {
      double d = f[k] - p[k];
      s.add(d * d);
    }
    double dist = std::sqrt(s.total() / (double)f.domain_size());
    if (dist <= tol) return (int)t;
  }
  return std::nullopt;
}

}  // namespace snf
