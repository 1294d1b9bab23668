#include "snf/strong_line.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace snf {

namespace {
constexpr double kTolFloor = 1e-9;
constexpr int kExactPermanentLimit = 14;
}  // namespace

LargenessClassifier LargenessClassifier::paper(double epsilon, double c) {
  return fixed(std::max(50.0 * std::pow(epsilon, 1.0 / 7.0), kTolFloor), c);
}

LargenessClassifier LargenessClassifier::fixed(double threshold, double c) {
  LargenessClassifier cls;
  cls.threshold = std::max(threshold, kTolFloor);
  cls.c = c;
  cls.target_a = 2.0 * c;
  cls.target_b = 2.0 * (1.0 - c);
  return cls;
}

BoolMatrix BoolMatrix::submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const {
  BoolMatrix s((int)rs.size(), (int)cs.size());
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j) s.set(i, j, at(rs[(std::size_t)i], cs[(std::size_t)j]));
  return s;
}

BoolMatrix classify(const CoefficientMatrix& M, const LargenessClassifier& cls) {
  BoolMatrix L(M.n, M.n);
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j) L.set(i, j, cls.is_large(M(i, j)));
  return L;
}

std::uint64_t permanent01(const std::vector<std::uint32_t>& row_masks) {
  int m = (int)row_masks.size();
  if (m == 0) return 1;
  if (m > kExactPermanentLimit) throw CapacityError("permanent01: m > 14");
  std::vector<int> rowsum((std::size_t)m, 0);
  __int128 total = 0;
  std::uint32_t gray = 0;
  std::uint64_t limit = 1ULL << m;
  for (std::uint64_t k = 1; k < limit; ++k) {
    int bit = std::countr_zero(k);
    std::uint32_t mask = 1u << bit;
    gray ^= mask;
    int delta = (gray & mask) ? 1 : -1;
    for (int i = 0; i < m; ++i)
      if (row_masks[(std::size_t)i] & mask) rowsum[(std::size_t)i] += delta;
    __int128 prod = 1;
    for (int i = 0; i < m; ++i) {
      prod *= rowsum[(std::size_t)i];
      if (prod == 0) break;
    }
    if ((m - std::popcount(gray)) & 1)
      total -= prod;
    else
      total += prod;
  }
  return (std::uint64_t)total;
}

double good_diagonal_fraction_exact(const BoolMatrix& L) {
  if (L.rows != L.cols) throw std::invalid_argument("good_diagonal_fraction: matrix not square");
  int m = L.rows;
  if (m < 1) throw std::invalid_argument("good_diagonal_fraction: empty matrix");
  if (m > kExactPermanentLimit)
    throw CapacityError("good_diagonal_fraction_exact: m > 14; use the Monte Carlo estimator");
  std::vector<std::uint32_t> small((std::size_t)m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!L.at(i, j)) small[(std::size_t)i] |= 1u << j;
  auto compress = [&](std::uint32_t mask, int col) {
    std::uint32_t lo = mask & ((1u << col) - 1u);
    std::uint32_t hi = (mask >> (col + 1)) << col;
    return lo | hi;
  };
  std::uint64_t good = 0;
  std::vector<std::uint32_t> minor((std::size_t)(m - 1));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!L.at(i, j)) continue;
      int t = 0;
      for (int r = 0; r < m; ++r)
        if (r != i) minor[(std::size_t)t++] = compress(small[(std::size_t)r], j);
      good += permanent01(minor);
    }
  }
  return (double)good / (double)factorial(m);
}

McEstimate good_diagonal_fraction_mc(const BoolMatrix& L, std::uint64_t samples, Rng& rng) {
  if (L.rows != L.cols) throw std::invalid_argument("good_diagonal_fraction: matrix not square");
  int m = L.rows;
  std::vector<int> perm((std::size_t)m);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t good = 0;
  for (std::uint64_t it = 0; it < samples; ++it) {
    rng.shuffle(perm);
    int large = 0;
    for (int i = 0; i < m && large < 2; ++i)
      if (L.at(i, perm[(std::size_t)i])) ++large;
    if (large == 1) ++good;
  }
  McEstimate e;
  e.value = (double)good / (double)samples;
  e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / (double)samples);
  return e;
}

std::optional<StrongLineReport> find_strong_line_direct(const BoolMatrix& L, double p_max) {
  if (L.rows != L.cols || L.rows == 0) throw std::invalid_argument("strong line: bad matrix");
  int m = L.rows;
  double best = 2.0;
  Line best_line;
  auto consider = [&](LineKind kind, int idx, int non_large) {
    double p = (double)non_large / (double)m;
    if (p < best) {
      best = p;
      best_line = {kind, idx};
    }
  };
  for (int i = 0; i < m; ++i) {
    int miss = 0;
    for (int j = 0; j < m; ++j)
      if (!L.at(i, j)) ++miss;
    consider(LineKind::Row, i, miss);
  }
  for (int j = 0; j < m; ++j) {
    int miss = 0;
    for (int i = 0; i < m; ++i)
      if (!L.at(i, j)) ++miss;
    consider(LineKind::Column, j, miss);
  }
  if (best > p_max) return std::nullopt;
  StrongLineReport rep;
  rep.kind = best_line.kind;
  rep.index = best_line.index;
  rep.strength_p = best;
  rep.method = DetectMethod::Direct;
  return rep;
}

std::uint64_t conflict_count(const BoolMatrix& L, Line a, Line b) {
  if (a == b) throw std::invalid_argument("conflict_count: lines must differ");
  auto cells = [&](Line ln) {
    std::vector<std::pair<int, int>> out;
    if (ln.kind == LineKind::Row) {
      for (int j = 0; j < L.cols; ++j)
        if (L.at(ln.index, j)) out.push_back({ln.index, j});
    } else {
      for (int i = 0; i < L.rows; ++i)
        if (L.at(i, ln.index)) out.push_back({i, ln.index});
    }
    return out;
  };
  auto ca = cells(a), cb = cells(b);
  std::uint64_t ok = 0;
  for (auto& x : ca)
    for (auto& y : cb)
      if (x.first != y.first && x.second != y.second) ++ok;
  return ok;
}

// --- recursive detection -----------------------------------------------------

namespace {

struct Measure {
  double q = 1.0;
  double stderr_ = 0.0;
  bool exact = false;
};

struct RecurseCtx {
  const BoolMatrix& L;
  const RecursiveOptions& opts;
  double q;  // target goodness level of the recursion
  Rng streams;
  std::uint64_t stream_counter = 0;
  std::vector<std::string>* trace = nullptr;
  bool degraded = false;

  Rng next_stream() { return streams.split(stream_counter++); }
};

Measure measure_goodness(RecurseCtx& ctx, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  BoolMatrix sub = ctx.L.submatrix(rows, cols);
  Measure m;
  if (sub.rows <= kExactPermanentLimit) {
    m.q = 1.0 - good_diagonal_fraction_exact(sub);
    m.exact = true;
  } else {
    Rng rng = ctx.next_stream();
    McEstimate e = good_diagonal_fraction_mc(sub, ctx.opts.mc_samples, rng);
    m.q = 1.0 - e.value;
    m.stderr_ = e.stderr_;
  }
  return m;
}

bool q_good(const RecurseCtx& ctx, const Measure& m) {
  double slack = m.exact ? 1e-12 : ctx.opts.q_slack_sigmas * m.stderr_;
  return m.q <= ctx.q + slack;
}

/// 0-strong (fully large) line of the submatrix, in global coordinates.
std::optional<Line> zero_strong_line(const BoolMatrix& L, const std::vector<int>& rows,
                                     const std::vector<int>& cols) {
  for (int r : rows) {
    bool all = true;
    for (int c : cols)
      if (!L.at(r, c)) {
        all = false;
        break;
      }
    if (all) return Line{LineKind::Row, r};
  }
  for (int c : cols) {
    bool all = true;
    for (int r : rows)
      if (!L.at(r, c)) {
        all = false;
        break;
      }
    if (all) return Line{LineKind::Column, c};
  }
  return std::nullopt;
}

Line best_direct_line(const BoolMatrix& L, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  auto rep = find_strong_line_direct(L.submatrix(rows, cols), 1.0);
  // p_max = 1 always yields a line
  if (rep->kind == LineKind::Row) return {LineKind::Row, rows[(std::size_t)rep->index]};
  return {LineKind::Column, cols[(std::size_t)rep->index]};
}

std::vector<int> split_half(const std::vector<int>& xs, int strategy) {
  int s = (int)xs.size() / 2;
  std::vector<int> out;
  out.reserve((std::size_t)s);
  if (strategy == 0) {
    out.assign(xs.begin(), xs.begin() + s);
  } else if (strategy == 1) {
    out.assign(xs.end() - s, xs.end());
  } else {
    for (std::size_t i = 0; i < xs.size() && (int)out.size() < s; i += 2) out.push_back(xs[i]);
    for (std::size_t i = 1; i < xs.size() && (int)out.size() < s; i += 2) out.push_back(xs[i]);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<int> set_minus(const std::vector<int>& xs, const std::vector<int>& ys) {
  std::vector<int> out;
  out.reserve(xs.size() - ys.size());
  for (int x : xs)
    if (!std::binary_search(ys.begin(), ys.end(), x)) out.push_back(x);
  return out;
}

Line recurse(RecurseCtx& ctx, std::vector<int> rows, std::vector<int> cols, int strategy) {
  int m = (int)rows.size();
  bool base = m <= 2 || ctx.q <= 0.0 || (double)m < 1.0 / (4.0 * ctx.q);
  if (base) {
    if (auto ln = zero_strong_line(ctx.L, rows, cols)) return *ln;
    ctx.trace->push_back("base case at m=" + std::to_string(m) +
                         " found no 0-strong line; falling back to direct scan");
    ctx.degraded = true;
    return best_direct_line(ctx.L, rows, cols);
  }
  int s = m / 2;
  std::vector<int> xp = split_half(rows, strategy);
  std::vector<int> xrest = set_minus(rows, xp);

  // Candidate Y' orderings: greedy by column large-counts over X' rows, then
  // exhaustive enumeration (m <= 12) or seeded random subsets.
  std::vector<int> by_count = cols;
  {
    std::vector<int> count((std::size_t)cols.size(), 0);
    for (std::size_t ci = 0; ci < cols.size(); ++ci)
      for (int r : xp)
        if (ctx.L.at(r, cols[ci])) ++count[ci];
    std::vector<std::size_t> order(cols.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (count[a] != count[b]) return count[a] > count[b];
      return cols[a] < cols[b];
    });
    for (std::size_t i = 0; i < order.size(); ++i) by_count[i] = cols[order[i]];
  }
  std::vector<int> greedy(by_count.begin(), by_count.begin() + s);
  std::sort(greedy.begin(), greedy.end());

  auto try_candidate = [&](const std::vector<int>& yp) -> std::optional<Line> {
    std::vector<int> yrest = set_minus(cols, yp);
    Measure qa = measure_goodness(ctx, xp, yp);
    if (q_good(ctx, qa)) return recurse(ctx, xp, yp, strategy);
    Measure qb = measure_goodness(ctx, xrest, yrest);
    if (q_good(ctx, qb)) return recurse(ctx, std::move(xrest), std::move(yrest), strategy);
    return std::nullopt;
  };

  if (auto ln = try_candidate(greedy)) return *ln;

  if (m <= 12) {
    // Exhaustive: all s-subsets of cols in lexicographic order.
    std::vector<int> idx((std::size_t)s);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<int> yp((std::size_t)s);
      for (int t = 0; t < s; ++t) yp[(std::size_t)t] = cols[(std::size_t)idx[(std::size_t)t]];
      if (yp != greedy)
        if (auto ln = try_candidate(yp)) return *ln;
      int t = s - 1;
      while (t >= 0 && idx[(std::size_t)t] == m - s + t) --t;
      if (t < 0) break;
      ++idx[(std::size_t)t];
      for (int u = t + 1; u < s; ++u) idx[(std::size_t)u] = idx[(std::size_t)(u - 1)] + 1;
    }
  } else {
    Rng rng = ctx.next_stream();
    for (int it = 0; it < ctx.opts.fallback_candidates; ++it) {
      std::vector<int> pick = rng.sample_distinct(m, s);
      std::vector<int> yp;
      yp.reserve((std::size_t)s);
      for (int t : pick) yp.push_back(cols[(std::size_t)t]);
      std::sort(yp.begin(), yp.end());
      if (auto ln = try_candidate(yp)) return *ln;
    }
  }
  ctx.trace->push_back("halving at m=" + std::to_string(m) +
                       " found no q-good side; falling back to direct scan");
  ctx.degraded = true;
  return best_direct_line(ctx.L, rows, cols);
}

std::string line_name(Line ln) {
  return (ln.kind == LineKind::Row ? "row " : "column ") + std::to_string(ln.index);
}

}  // namespace

StrongLineReport find_strong_line_recursive(const BoolMatrix& L, double q,
                                            const RecursiveOptions& opts) {
  if (L.rows != L.cols || L.rows == 0) throw std::invalid_argument("strong line: bad matrix");
  int m = L.rows;
  StrongLineReport rep;
  rep.method = DetectMethod::Recursive;

  RecurseCtx ctx{L, opts, q, Rng(opts.seed, 0x51f0ULL), 0, &rep.trace, false};
  std::vector<int> rows((std::size_t)m), cols((std::size_t)m);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  Measure full = measure_goodness(ctx, rows, cols);
  rep.q_good = full.q;
  rep.trace.push_back("measured q = " + std::to_string(full.q));

  double slack = full.exact ? 0.0 : opts.q_slack_sigmas * full.stderr_;
  if (full.q > 0.02 + slack) {
    rep.trace.push_back("precondition q < 1/50 violated; direct-scan result, degraded");
    rep.degraded = true;
    auto direct = find_strong_line_direct(L, 1.0);
    rep.kind = direct->kind;
    rep.index = direct->index;
    rep.strength_p = direct->strength_p;
    return rep;
  }

  Line cand[3];
  for (int strat = 0; strat < 3; ++strat)
    cand[strat] = recurse(ctx, rows, cols, strat);
  rep.degraded = ctx.degraded;

  // Alignment vote across the three splits.
  Line winner = cand[0];
  int best_votes = 0;
  for (int i = 0; i < 3; ++i) {
    int votes = 0;
    for (int j = 0; j < 3; ++j)
      if (cand[j] == cand[i]) ++votes;
    if (votes > best_votes) {
      best_votes = votes;
      winner = cand[i];
    }
  }
  if (best_votes < 3) {
    rep.trace.push_back("splits disagreed: " + line_name(cand[0]) + " / " + line_name(cand[1]) +
                        " / " + line_name(cand[2]));
    for (int i = 0; i < 3; ++i) {
      if (cand[i] == winner) continue;
      std::uint64_t nc = conflict_count(L, winner, cand[i]);
      if ((double)nc / ((double)m * (double)(m - 1)) > full.q + slack)
        throw ConflictingLinesError(winner, cand[i], nc,
                                    "conflicting strong lines: " + line_name(winner) + " vs " +
                                        line_name(cand[i]) + " (" + std::to_string(nc) +
                                        " non-conflicting large pairs exceed the goodness level)");
    }
    if (best_votes == 1) rep.degraded = true;
  }

  // Expand to the full matrix and bootstrap-check the scattered large count.
  int on_line = 0, total_large = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (L.at(i, j)) {
        ++total_large;
        if ((winner.kind == LineKind::Row && i == winner.index) ||
            (winner.kind == LineKind::Column && j == winner.index))
          ++on_line;
      }
  rep.kind = winner.kind;
  rep.index = winner.index;
  rep.strength_p = (double)(m - on_line) / (double)m;
  if (rep.strength_p < 1.0) {
    double rho = 2.0 * full.q / (1.0 - rep.strength_p);
    int outside = total_large - on_line;
    if (outside > 0 && (double)outside >= 3.0 * rho * (double)m) {
      rep.trace.push_back("bootstrap budget exceeded: " + std::to_string(outside) +
                          " large entries off the line");
      rep.degraded = true;
    }
  }
  return rep;
}

}  // namespace snf
