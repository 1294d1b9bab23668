#include "snf/restriction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "snf/errors.hpp"
#include "snf/parallel.hpp"

namespace snf {

namespace {

constexpr double kTolFloor = 1e-9;

std::vector<int> mask_bits(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1u) out.push_back(i);
  return out;
}

}  // namespace

Restriction sample_restriction(int n, Rng& rng) {
  Restriction r;
  r.n = n;
  r.X = rng.subset_mask(n);
  int k = std::popcount(r.X);
  std::uint32_t Y = 0;
  for (int j : rng.sample_distinct(n, k)) Y |= 1u << j;
  r.Y = Y;
  return r;
}

double restriction_mean(const CoefficientMatrix& M, const Restriction& r) {
  if (r.n != M.n) throw std::invalid_argument("restriction_mean: mismatched n");
  if (std::popcount(r.X) != std::popcount(r.Y))
    throw std::invalid_argument("restriction: |X| != |Y|");
  int k = std::popcount(r.X);
  if (k == 0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < M.n; ++i) {
    if (!((r.X >> i) & 1u)) continue;
    for (int j = 0; j < M.n; ++j)
      if ((r.Y >> j) & 1u) s += M(i, j);
  }
  return s / (double)k;
}

MomentCheck moment_check(const CoefficientMatrix& M, std::uint64_t samples, Rng& rng) {
  if (samples < 1000) throw std::invalid_argument("moment_check: need at least 1000 samples");
  std::vector<double> ms;
  ms.reserve(samples);
  for (std::uint64_t it = 0; it < samples; ++it)
    ms.push_back(restriction_mean(M, sample_restriction(M.n, rng)));
  double mean = tree_sum(ms) / (double)samples;
  BlockSum v2, v4;
  for (double m : ms) {
    double d = m - mean;
    v2.add(d * d);
    v4.add(d * d * d * d);
  }
  double nD = (double)samples;
  MomentCheck out;
  out.samples = samples;
  out.mean_hat = mean;
  out.var_hat = v2.total() / (nD - 1.0);
  out.mean_stderr = std::sqrt(out.var_hat / nD);
  double m4 = v4.total() / nD;
  double se2 = (m4 - (nD - 3.0) / (nD - 1.0) * out.var_hat * out.var_hat) / nD;
  out.var_stderr = se2 > 0 ? std::sqrt(se2) : 0.0;
  out.var_bound_ok = out.var_hat <= 1.0 / (2.0 * (double)M.n) + 3.0 * out.var_stderr;
  return out;
}

ExactMoments restriction_moments_closed_form(const CoefficientMatrix& M) {
  int n = M.n;
  double s = 2.0 * M.c - 1.0;
  double Q = M.sum_squares();
  double n1 = (double)(n - 1);
  ExactMoments out;
  out.mean = M.c - 0.5;
  out.variance = (double)(n + 1) * Q / (4.0 * (double)n * n1 * n1) +
                 (double)(n - 3) * s * s / (4.0 * n1 * n1) -
                 std::ldexp((Q - s * s) / (n1 * n1), -n);
  return out;
}

std::pair<double, double> decompose_g(const CoefficientMatrix& M, const Restriction& r,
                                      const Permutation& p) {
  if (p.n() != M.n || r.n != M.n) throw std::invalid_argument("decompose_g: mismatched n");
  std::uint32_t image = 0;
  for (int i = 0; i < M.n; ++i)
    if ((r.X >> i) & 1u) image |= 1u << p(i);
  if (image != r.Y) throw std::invalid_argument("decompose_g: permutation not in T_{X,Y}");
  double g1 = 0.0, g2 = 0.0;
  for (int i = 0; i < M.n; ++i) {
    double v = M(i, p(i));
    if ((r.X >> i) & 1u)
      g1 += v;
    else
      g2 += v;
  }
  return {g1, g2};
}

GoodnessParams GoodnessParams::from(double epsilon, double c) {
  GoodnessParams g;
  g.epsilon = epsilon;
  g.c = c;
  g.eps17 = std::max(std::pow(epsilon, 1.0 / 7.0), kTolFloor);
  g.tol_center = 25.0 * g.eps17;
  g.large_threshold = 50.0 * g.eps17;
  return g;
}

TypicalityReport typicality(const CoefficientMatrix& M, const Restriction& r,
                            const GoodnessParams& params) {
  int n = M.n;
  if (r.n != n) throw std::invalid_argument("typicality: mismatched n");
  auto xs = mask_bits(r.X, n), ys = mask_bits(r.Y, n);
  auto xc = mask_bits(~r.X & ((1u << n) - 1u), n), yc = mask_bits(~r.Y & ((1u << n) - 1u), n);
  if (xs.size() != ys.size()) throw std::invalid_argument("restriction: |X| != |Y|");

  // All g1 values over bijections X -> Y, likewise g2 over complements.
  auto diag_sums = [&](const std::vector<int>& rows, std::vector<int> cols) {
    std::vector<double> vals;
    std::sort(cols.begin(), cols.end());
    do {
      double s = 0.0;
      for (std::size_t t = 0; t < rows.size(); ++t) s += M(rows[t], cols[t]);
      vals.push_back(s);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return vals;
  };
  std::vector<double> g1 = diag_sums(xs, ys);
  std::vector<double> g2 = diag_sums(xc, yc);

  TypicalityReport rep;
  rep.e_g1 = tree_sum(g1) / (double)g1.size();
  rep.e_g2 = tree_sum(g2) / (double)g2.size();
  double eps47 = std::max(std::pow(params.epsilon, 4.0 / 7.0), kTolFloor);
  double eps67 = std::max(std::pow(params.epsilon, 6.0 / 7.0), kTolFloor);

  std::uint64_t bad = 0;
  BlockSum dev2;
  for (double a : g1)
    for (double b : g2) {
      double g = std::fabs(a + b) - 1.0;
      if (std::fabs(g) > params.eps17) ++bad;
      dev2.add(g * g);
    }
  double total = (double)g1.size() * (double)g2.size();
  rep.boolean_fail_prob = (double)bad / total;
  rep.l2_deviation = dev2.total() / total;

  double center = params.c - 0.5;
  rep.a_ok = rep.boolean_fail_prob <= eps47;
  rep.b_ok = std::fabs(rep.e_g1 - center) <= params.eps17 &&
             std::fabs(rep.e_g2 - center) <= params.eps17;
  rep.c_ok = rep.l2_deviation <= eps67;
  return rep;
}

bool partition_good(const CoefficientMatrix& M, const Permutation& p, std::uint32_t X,
                    const GoodnessParams& params) {
  if (p.n() != M.n) throw std::invalid_argument("partition_good: mismatched n");
  double p1 = 0.0, p2 = 0.0;
  for (int i = 0; i < M.n; ++i) {
    double v = M(i, p(i));
    if ((X >> i) & 1u)
      p1 += v;
    else
      p2 += v;
  }
  double center = params.c - 0.5;
  double lo = -params.c - 0.5, hi = 1.5 - params.c;
  double tol = params.tol_center;
  auto near_center = [&](double x) { return std::fabs(x - center) <= tol; };
  auto near_pair = [&](double x) {
    return std::fabs(x - lo) <= tol || std::fabs(x - hi) <= tol;
  };
  return (near_center(p1) && near_pair(p2)) || (near_center(p2) && near_pair(p1));
}

PermutationGoodness permutation_good(const CoefficientMatrix& M, const Permutation& p,
                                     const GoodnessParams& params, std::uint64_t partition_samples,
                                     Rng& rng) {
  PermutationGoodness out;
  if (partition_samples == 0) {
    if (M.n > 20) throw CapacityError("permutation_good: exact mode requires n <= 20");
    std::uint64_t total = 1ULL << M.n, good = 0;
    for (std::uint64_t X = 0; X < total; ++X)
      if (partition_good(M, p, (std::uint32_t)X, params)) ++good;
    out.fraction = (double)good / (double)total;
  } else {
    if (partition_samples < 100)
      throw std::invalid_argument("permutation_good: need at least 100 samples");
    std::uint64_t good = 0;
    for (std::uint64_t it = 0; it < partition_samples; ++it)
      if (partition_good(M, p, rng.subset_mask(M.n), params)) ++good;
    out.fraction = (double)good / (double)partition_samples;
    out.stderr_ = std::sqrt(out.fraction * (1.0 - out.fraction) / (double)partition_samples);
  }
  out.is_good = out.fraction >= 0.8;
  return out;
}

DiagonalStructure diagonal_structure(const CoefficientMatrix& M, const Permutation& p,
                                     const GoodnessParams& params) {
  if (p.n() != M.n) throw std::invalid_argument("diagonal_structure: mismatched n");
  double t1 = 2.0 * params.c, t2 = 2.0 * (1.0 - params.c);
  double thr = params.large_threshold;
  DiagonalStructure out;
  int first_large = -1;
  for (int i = 0; i < M.n; ++i) {
    double m = std::fabs(M(i, p(i)));
    bool large = std::fabs(m - t1) <= thr || std::fabs(m - t2) <= thr;
    if (large) {
      ++out.large_count;
      if (first_large < 0) first_large = i;
    } else {
      out.max_small = std::max(out.max_small, m);
    }
  }
  out.large_position = out.large_count == 1 ? first_large : (out.large_count > 1 ? first_large : -1);
  out.conforms = out.large_count == 1 && out.max_small <= thr;
  return out;
}

}  // namespace snf
