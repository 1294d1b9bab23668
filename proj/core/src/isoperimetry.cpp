#include "snf/isoperimetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "snf/errors.hpp"
#include "snf/parallel.hpp"
#include "snf/rng.hpp"

namespace snf {

TranspositionGraph::TranspositionGraph(int n) : n_(n), degree_(n * (n - 1) / 2) {
  if (n < 2 || n > kMaxDenseN) throw CapacityError("transposition graph: n out of range");
  std::uint64_t nf = factorial(n);
  adj_.resize(nf * (std::uint64_t)degree_);
  parallel_chunks(nf, default_chunks(nf), [&](int, std::uint64_t lo, std::uint64_t hi) {
    std::vector<int> pos((std::size_t)n), im((std::size_t)n);
    enumerate_permutations(n, lo, hi, [&](PermRank k, const std::vector<int>& images) {
      for (int i = 0; i < n; ++i) pos[(std::size_t)images[(std::size_t)i]] = i;
      std::uint32_t* row = adj_.data() + k * (std::uint64_t)degree_;
      int t = 0;
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
          im = images;
          std::swap(im[(std::size_t)pos[(std::size_t)x]], im[(std::size_t)pos[(std::size_t)y]]);
          row[t++] = (std::uint32_t)rank_of_images(im);
        }
    });
  });
}

const TranspositionGraph& TranspositionGraph::get(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TranspositionGraph>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::unique_ptr<TranspositionGraph>(new TranspositionGraph(n))).first;
  return *it->second;
}

std::uint64_t edge_boundary(const BooleanFamily& F) {
  int n = F.n();
  if (n == 1) return 0;
  if (!F.is_explicit()) {
    if (F.added().empty() && F.removed().empty())
      return F.size() * (std::uint64_t)(n - (int)F.cross().size());
    if (n > kMaxDenseN)
      throw std::invalid_argument(
          "edge_boundary: unsupported symbolic shape (exception lists); materialize first");
    return edge_boundary(F.materialize());
  }
  const auto& G = TranspositionGraph::get(n);
  const RankBitset& bits = F.bits();
  std::uint64_t nf = factorial(n);
  int deg = G.degree();
  int chunks = default_chunks(nf);
  std::vector<std::uint64_t> partial((std::size_t)chunks, 0);
  parallel_chunks(nf, chunks, [&](int ci, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t count = 0;
    for (std::uint64_t k = lo; k < hi; ++k) {
      if (!bits.test(k)) continue;
      const std::uint32_t* row = G.neighbors(k);
      for (int t = 0; t < deg; ++t)
        if (!bits.test(row[t])) ++count;
    }
    partial[(std::size_t)ci] = count;
  });
  std::uint64_t total = 0;
  for (std::uint64_t p : partial) total += p;
  return total;
}

BoundaryReport diaconis_check(const BooleanFamily& F) {
  BoundaryReport r;
  r.size = F.size();
  r.boundary = edge_boundary(F);
  r.c = F.density();
  r.bound = (1.0 - r.c) * (double)F.n() * (double)r.size;
  r.slack = (double)r.boundary - r.bound;
  r.delta0 = r.size == 0 ? 0.0
                         : (double)r.boundary / ((double)F.n() * (double)r.size) - (1.0 - r.c);
  r.equality = r.slack <= 1e-6;
  return r;
}

IsoStability iso_stability(const BooleanFamily& F, const RecoverOptions& opts) {
  IsoStability out{diaconis_check(F), 0.0, 0.0, 0.0, recover(F, opts)};
  out.eps_pm1 = out.recovery.epsilon;
  out.eps_chi_actual = out.eps_pm1 / 4.0;  // 0/1 convention: distance scales by 1/4
  int n = F.n();
  out.eps_chi_bound = (double)n / (double)(n - 2) * out.boundary.c * out.boundary.delta0;
  if (out.recovery.epsilon_kind == EpsilonKind::Exact &&
      out.eps_chi_actual > out.eps_chi_bound + 1e-9)
    throw PipelineError("isoperimetric stability bound violated: eps/4 = " +
                        std::to_string(out.eps_chi_actual) + " > " +
                        std::to_string(out.eps_chi_bound));
  return out;
}

BooleanFamily lex_segment(int n, std::uint64_t k) {
  if (n < 1 || n > kMaxDenseN) throw CapacityError("lex_segment: n out of range");
  std::uint64_t nf = factorial(n);
  if (k > nf) throw std::invalid_argument("lex_segment: k > n!");
  RankBitset bits(nf);
  for (std::uint64_t r = 0; r < k; ++r) bits.set(r);
  return BooleanFamily::from_bitset(n, std::move(bits));
}

namespace {

/// Exhaustive per-size minima over all subsets of S_n (n <= 4, so n! <= 24
/// and a subset fits a 32-bit mask).
void exhaustive_minima(int n, std::vector<std::uint64_t>& best,
                       std::vector<std::uint32_t>& witness) {
  std::uint64_t nf = factorial(n);
  const auto& G = TranspositionGraph::get(n);
  int deg = G.degree();
  std::vector<std::uint32_t> adj((std::size_t)nf, 0);
  for (std::uint64_t v = 0; v < nf; ++v) {
    const std::uint32_t* row = G.neighbors(v);
    for (int t = 0; t < deg; ++t) adj[(std::size_t)v] |= 1u << row[t];
  }
  best.assign((std::size_t)nf + 1, ~0ULL);
  witness.assign((std::size_t)nf + 1, 0);
  std::uint64_t total = 1ULL << nf;
  int chunks = default_chunks(total);
  std::vector<std::vector<std::uint64_t>> pb((std::size_t)chunks);
  std::vector<std::vector<std::uint32_t>> pw((std::size_t)chunks);
  parallel_chunks(total, chunks, [&](int ci, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> b((std::size_t)nf + 1, ~0ULL);
    std::vector<std::uint32_t> w((std::size_t)nf + 1, 0);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      auto F = (std::uint32_t)mask;
      int k = std::popcount(F);
      std::uint64_t boundary = 0;
      std::uint32_t rest = F;
      while (rest) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        boundary += (std::uint64_t)std::popcount(adj[(std::size_t)v] & ~F);
      }
      if (boundary < b[(std::size_t)k]) {
        b[(std::size_t)k] = boundary;
        w[(std::size_t)k] = F;
      }
    }
    pb[(std::size_t)ci] = std::move(b);
    pw[(std::size_t)ci] = std::move(w);
  });
  for (int ci = 0; ci < chunks; ++ci)
    for (std::size_t k = 0; k <= nf; ++k)
      if (pb[(std::size_t)ci][k] < best[k] ||
          (pb[(std::size_t)ci][k] == best[k] && pw[(std::size_t)ci][k] < witness[k])) {
        best[k] = pb[(std::size_t)ci][k];
        witness[k] = pw[(std::size_t)ci][k];
      }
}

struct LocalSearchState {
  const TranspositionGraph* G;
  std::uint64_t nf;
  int deg;
  RankBitset in;
  std::vector<int> inside_neighbors;  // per vertex, count of neighbors in F
  std::uint64_t boundary = 0;

  void init(int n, const std::vector<PermRank>& members) {
    G = &TranspositionGraph::get(n);
    nf = factorial(n);
    deg = G->degree();
    in = RankBitset(nf);
    for (PermRank k : members) in.set(k);
    inside_neighbors.assign((std::size_t)nf, 0);
    boundary = 0;
    for (std::uint64_t v = 0; v < nf; ++v) {
      const std::uint32_t* row = G->neighbors(v);
      int cnt = 0;
      for (int t = 0; t < deg; ++t)
        if (in.test(row[t])) ++cnt;
      inside_neighbors[(std::size_t)v] = cnt;
      if (in.test(v)) boundary += (std::uint64_t)(deg - cnt);
    }
  }

  // Boundary change of toggling v (in either direction).
  std::int64_t toggle_delta(std::uint64_t v) const {
    int cnt = inside_neighbors[(std::size_t)v];
    if (in.test(v)) return (std::int64_t)(2 * cnt - deg);
    return (std::int64_t)(deg - 2 * cnt);
  }

  void toggle(std::uint64_t v) {
    boundary = (std::uint64_t)((std::int64_t)boundary + toggle_delta(v));
    bool now_in = !in.test(v);
    const std::uint32_t* row = G->neighbors(v);
    for (int t = 0; t < deg; ++t) inside_neighbors[(std::size_t)row[t]] += now_in ? 1 : -1;
    if (now_in)
      in.set(v);
    else
      in.reset(v);
  }

  // Swap: u leaves F, w enters F. Exact via two toggles.
  std::uint64_t swapped_boundary(std::uint64_t u, std::uint64_t w) {
    toggle(u);
    toggle(w);
    std::uint64_t b = boundary;
    toggle(w);
    toggle(u);
    return b;
  }
};

}  // namespace

std::vector<ConjectureRow> conjecture_scan(int n, const std::vector<std::uint64_t>& sizes,
                                           ScanMode mode, const LocalSearchParams& params) {
  std::uint64_t nf = factorial(n);
  std::vector<std::uint64_t> ks = sizes;
  if (ks.empty()) {
    ks.resize((std::size_t)nf + 1);
    std::iota(ks.begin(), ks.end(), 0);
  }
  for (std::uint64_t k : ks)
    if (k > nf) throw std::invalid_argument("conjecture_scan: size k > n!");

  std::vector<ConjectureRow> rows;
  rows.reserve(ks.size());

  if (mode == ScanMode::Exhaustive) {
    if (n > 4) throw CapacityError("conjecture_scan: exhaustive mode requires n <= 4");
    std::vector<std::uint64_t> best;
    std::vector<std::uint32_t> witness;
    exhaustive_minima(n, best, witness);
    for (std::uint64_t k : ks) {
      ConjectureRow row;
      row.k = k;
      row.lex_boundary = edge_boundary(lex_segment(n, k));
      row.best_boundary = best[(std::size_t)k];
      row.improved = row.best_boundary < row.lex_boundary;
      if (row.improved) {
        RankBitset w(nf);
        for (std::uint64_t v = 0; v < nf; ++v)
          if ((witness[(std::size_t)k] >> v) & 1u) w.set(v);
        row.witness = std::move(w);
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  if (n > 8) throw CapacityError("conjecture_scan: local search requires n <= 8");
  Rng master(params.seed, 0xc0de0ULL);
  for (std::uint64_t k : ks) {
    ConjectureRow row;
    row.k = k;
    row.lex_boundary = edge_boundary(lex_segment(n, k));
    row.best_boundary = ~0ULL;
    RankBitset best_set(nf);
    std::vector<std::uint64_t> results((std::size_t)params.restarts, ~0ULL);
    std::vector<RankBitset> result_sets((std::size_t)params.restarts);
    parallel_chunks((std::uint64_t)params.restarts, params.restarts,
                    [&](int, std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t restart = lo; restart < hi; ++restart) {
        Rng rng = master.split(k * 1000 + restart);
        std::vector<PermRank> members;
        {
          std::vector<int> picks = rng.sample_distinct((int)nf, (int)k);
          members.assign(picks.begin(), picks.end());
        }
        LocalSearchState st;
        st.init(n, members);
        if (k != 0 && k != nf) {
          int stale = 0;
          while (stale < params.patience) {
            // first-improvement over random member/non-member swaps
            std::uint64_t u, w;
            do {
              u = rng.below(nf);
            } while (!st.in.test(u));
            do {
              w = rng.below(nf);
            } while (st.in.test(w));
            std::uint64_t nb = st.swapped_boundary(u, w);
            if (nb < st.boundary) {
              st.toggle(u);
              st.toggle(w);
              stale = 0;
            } else {
              ++stale;
            }
          }
        }
        results[(std::size_t)restart] = st.boundary;
        result_sets[(std::size_t)restart] = st.in;
      }
    });
    for (int rs = 0; rs < params.restarts; ++rs)
      if (results[(std::size_t)rs] < row.best_boundary) {
        row.best_boundary = results[(std::size_t)rs];
        best_set = result_sets[(std::size_t)rs];
      }
    row.improved = row.best_boundary < row.lex_boundary;
    if (row.improved) row.witness = best_set;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace snf
