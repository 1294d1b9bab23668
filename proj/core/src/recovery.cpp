#include "snf/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "snf/parallel.hpp"

namespace snf {

namespace {

/// r(pos): probability that a random generalized diagonal through the cell is
/// good (exactly one large entry overall). Exact via permanents.
double through_cell_good_probability(const BoolMatrix& L, int ci, int cj) {
  int n = L.rows;
  std::vector<std::uint32_t> small((std::size_t)n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!L.at(i, j)) small[(std::size_t)i] |= 1u << j;
  auto compress = [](std::uint32_t mask, int col) {
    std::uint32_t lo = mask & ((1u << col) - 1u);
    std::uint32_t hi = (mask >> (col + 1)) << col;
    return lo | hi;
  };
  // Minor without row ci / column cj, in compressed coordinates.
  std::vector<std::uint32_t> minor;
  minor.reserve((std::size_t)(n - 1));
  std::vector<int> minor_rows;
  for (int r = 0; r < n; ++r) {
    if (r == ci) continue;
    minor.push_back(compress(small[(std::size_t)r], cj));
    minor_rows.push_back(r);
  }
  std::uint64_t good;
  if (L.at(ci, cj)) {
    good = permanent01(minor);
  } else {
    // Exactly one large entry among the remaining n-1 positions.
    good = 0;
    int m = (int)minor.size();
    std::vector<std::uint32_t> minor2((std::size_t)(m - 1));
    for (int r = 0; r < m; ++r) {
      std::uint32_t large_mask = ~minor[(std::size_t)r] & ((m >= 32) ? ~0u : ((1u << m) - 1u));
      while (large_mask) {
        int col = std::countr_zero(large_mask);
        large_mask &= large_mask - 1;
        int t = 0;
        for (int rr = 0; rr < m; ++rr)
          if (rr != r) minor2[(std::size_t)t++] = compress(minor[(std::size_t)rr], col);
        good += permanent01(minor2);
      }
    }
  }
  return (double)good / (double)factorial(n - 1);
}

/// Pr over T_{cell} of | |f_1| - 1 | > eps17. Exact enumeration for
/// n <= kMaxDenseN, Monte Carlo otherwise.
double coset_boolean_fail_prob(const CoefficientMatrix& M, int ci, int cj, double eps17,
                               Rng* rng) {
  int n = M.n;
  double base = M(ci, cj);
  std::vector<int> positions, values;
  for (int i = 0; i < n; ++i)
    if (i != ci) positions.push_back(i);
  for (int j = 0; j < n; ++j)
    if (j != cj) values.push_back(j);
  if (n <= kMaxDenseN) {
    std::uint64_t bad = 0, total = 0;
    std::sort(values.begin(), values.end());
    do {
      double s = base;
      for (std::size_t t = 0; t < positions.size(); ++t)
        s += M(positions[t], values[t]);
      if (std::fabs(std::fabs(s) - 1.0) > eps17) ++bad;
      ++total;
    } while (std::next_permutation(values.begin(), values.end()));
    return (double)bad / (double)total;
  }
  if (!rng) throw std::invalid_argument("reasonable: sampling path requires an rng");
  const std::uint64_t samples = 20000;
  std::uint64_t bad = 0;
  for (std::uint64_t it = 0; it < samples; ++it) {
    rng->shuffle(values);
    double s = base;
    for (std::size_t t = 0; t < positions.size(); ++t) s += M(positions[t], values[t]);
    if (std::fabs(std::fabs(s) - 1.0) > eps17) ++bad;
  }
  return (double)bad / (double)samples;
}

std::int64_t signed_sum(const BooleanFamily& F) {
  std::int64_t s = 0;
  enumerate_permutations(F.n(), [&](PermRank k, const std::vector<int>& im) {
    if (F.contains_enumerated(k, im)) s += sign_of_images(im);
  });
  return s;
}

}  // namespace

bool reasonable(const CoefficientMatrix& M, const BoolMatrix& L, Line line, int pos,
                const GoodnessParams& params, Rng* rng) {
  int ci = line.kind == LineKind::Row ? line.index : pos;
  int cj = line.kind == LineKind::Row ? pos : line.index;
  if (!L.at(ci, cj)) return false;
  if (through_cell_good_probability(L, ci, cj) < 0.8) return false;
  return coset_boolean_fail_prob(M, ci, cj, params.eps17, rng) <= 0.2;
}

MediumValueReport medium_value_check(const std::vector<double>& tau_line,
                                     const std::vector<char>& reasonable_mask, double c,
                                     const GoodnessParams& params) {
  MediumValueReport rep;
  if (std::fabs(c - 0.5) < 1e-12) {
    rep.gamma_far = false;
    rep.cluster = TauCluster::ZeroOne;
    return rep;
  }
  rep.gamma = c < 0.5 ? 2.0 * c : 2.0 * c - 1.0;
  rep.gamma_far = std::min(std::fabs(rep.gamma), std::fabs(1.0 - rep.gamma)) >
                  156.0 * params.eps17;
  if (!rep.gamma_far) {
    rep.cluster = TauCluster::ZeroOne;
    return rep;
  }
  double tol = 26.0 * params.eps17;
  int at_gamma = 0, elsewhere = 0;
  for (std::size_t j = 0; j < tau_line.size(); ++j) {
    if (!reasonable_mask[j]) continue;
    ++rep.reasonable_count;
    if (std::fabs(tau_line[j] - rep.gamma) <= tol)
      ++at_gamma;
    else
      ++elsewhere;
  }
  if (at_gamma > 0 && elsewhere > 0)
    rep.cluster = TauCluster::MixedViolation;
  else if (at_gamma > 0)
    rep.cluster = TauCluster::Gamma;
  else
    rep.cluster = TauCluster::ZeroOne;
  return rep;
}

RecoveryResult recover(const BooleanFamily& F, const RecoverOptions& opts) {
  int n = F.n();
  if (n < 2) throw std::invalid_argument("recover: n must be at least 2");
  MatrixOptions mo;
  mo.mc_samples = opts.mc_samples;
  mo.seed = opts.seed;
  CoefficientMatrix M = coefficient_matrix(F, mo);
  GoodnessParams params = GoodnessParams::from(std::max(M.epsilon, 0.0), M.c);

  double thr = opts.large_threshold.value_or(
      std::max(50.0 * params.eps17, 3.0 / (double)n));
  LargenessClassifier cls = LargenessClassifier::fixed(thr, M.c);
  BoolMatrix L = classify(M, cls);

  auto direct = find_strong_line_direct(L, opts.p_max);
  if (!direct) {
    auto best = find_strong_line_direct(L, 1.0);
    throw NoStrongLineError("no strong line: best non-large fraction " +
                                std::to_string(best->strength_p) + " exceeds p_max " +
                                std::to_string(opts.p_max) + " at large-threshold " +
                                std::to_string(thr),
                            best->strength_p, opts.p_max, thr);
  }
  StrongLineReport line_rep = *direct;
  line_rep.q_good = 1.0 - good_diagonal_fraction_exact(L);

  std::optional<StrongLineReport> rec_check;
  if (opts.recursive_crosscheck && line_rep.q_good < 0.02) {
    RecursiveOptions ro;
    ro.seed = opts.seed;
    try {
      rec_check = find_strong_line_recursive(L, line_rep.q_good, ro);
      if (rec_check->kind != line_rep.kind || rec_check->index != line_rep.index)
        line_rep.trace.push_back("recursive cross-check disagrees with direct scan");
    } catch (const PipelineError& e) {
      line_rep.trace.push_back(std::string("recursive cross-check failed: ") + e.what());
    }
  }

  TauMatrix T = tau_matrix(F);
  Line line{line_rep.kind, line_rep.index};
  std::vector<double> tau_line((std::size_t)n);
  for (int pos = 0; pos < n; ++pos)
    tau_line[(std::size_t)pos] =
        line.kind == LineKind::Row ? T(line.index, pos) : T(pos, line.index);

  std::optional<MediumValueReport> medium;
  if (std::fabs(M.c - 0.5) >= 1e-12) {
    double gamma = M.c < 0.5 ? 2.0 * M.c : 2.0 * M.c - 1.0;
    bool gamma_far =
        std::min(std::fabs(gamma), std::fabs(1.0 - gamma)) > 156.0 * params.eps17;
    if (gamma_far) {
      Rng rr(opts.seed, 0xadbeefULL);
      std::vector<char> mask((std::size_t)n, 0);
      for (int pos = 0; pos < n; ++pos)
        mask[(std::size_t)pos] = reasonable(M, L, line, pos, params, &rr) ? 1 : 0;
      medium = medium_value_check(tau_line, mask, M.c, params);
      if (medium->cluster == TauCluster::Gamma)
        throw PipelineError(
            "tau entries on the strong line cluster at the medium value gamma = " +
            std::to_string(medium->gamma) + "; inconsistent with a dictatorship");
    } else {
      MediumValueReport rep;
      rep.gamma = gamma;
      rep.gamma_far = false;
      rep.cluster = TauCluster::ZeroOne;
      medium = rep;
    }
  }

  double multiplier = std::fabs(M.c - 0.5) < 1e-12 ? 26.0 : 51.0;
  double tau_thr = opts.tau_threshold.value_or(1.0 - multiplier * params.eps17);
  std::vector<int> selected;
  for (int pos = 0; pos < n; ++pos)
    if (tau_line[(std::size_t)pos] >= tau_thr) selected.push_back(pos);

  BooleanFamily G =
      line.kind == LineKind::Row
          ? BooleanFamily::coset_union(n, BooleanFamily::Axis::Row, line.index, selected)
          : BooleanFamily::coset_union(n, BooleanFamily::Axis::Column, line.index, selected);

  RecoveryResult res{.G = G,
                     .d = (double)selected.size() / (double)n,
                     .symdiff_fraction =
                         (double)symmetric_difference(F, G) / (double)factorial(n),
                     .strong_line = line_rep,
                     .epsilon = M.epsilon,
                     .epsilon_kind = M.epsilon_kind,
                     .epsilon_stderr = M.epsilon_stderr,
                     .c = M.c,
                     .large_threshold_used = thr,
                     .tau_threshold_used = tau_thr,
                     .recursive_check = std::move(rec_check),
                     .medium = medium};
  return res;
}

InjectResult inject_error(const BooleanFamily& F, double upsilon, Rng& rng) {
  int n = F.n();
  if (n < 3) throw std::invalid_argument("inject_error: n must be at least 3");
  if (upsilon < 0.0 || upsilon > 1.0 / 16.0)
    throw std::invalid_argument("inject_error: upsilon must lie in [0, 1/16]");
  std::uint64_t nf = factorial(n);
  bool comp = 2 * F.size() < nf;
  BooleanFamily W = comp ? F.complement() : F.materialize();
  double K2 = upsilon * (double)nf * (double)nf;
  std::int64_t SF = 2 * signed_sum(W);  // n! <w, sgn>

  auto finish = [&](const BooleanFamily& Wout, std::uint64_t moved, std::int64_t SG) {
    InjectResult out{comp ? Wout.complement() : Wout, moved,
                     (comp ? -(double)SG : (double)SG) / (double)nf, false};
    out.certified = (double)SG * (double)SG >= K2 - 0.5;
    return out;
  };

  if ((double)SF * (double)SF >= K2 - 0.5) return finish(W, 0, SF);

  // Largest r with r^2 <= upsilon n!^2; |F xor H| = r <= sqrt(upsilon) n!.
  std::uint64_t r = (std::uint64_t)std::floor(std::sqrt(K2));
  while ((double)(r + 1) * (double)(r + 1) <= K2) ++r;
  while (r > 0 && (double)r * (double)r > K2) --r;
  if (r == 0) return finish(W, 0, SF);

  std::vector<PermRank> evens, odds;
  enumerate_permutations(n, [&](PermRank k, const std::vector<int>& im) {
    if (!W.contains_enumerated(k, im)) return;
    (sign_of_images(im) > 0 ? evens : odds).push_back(k);
  });
  bool remove_even = evens.size() >= odds.size();
  auto& pool = remove_even ? evens : odds;
  rng.shuffle(pool);
  RankBitset bits = W.bits();
  for (std::uint64_t t = 0; t < r; ++t) bits.reset(pool[(std::size_t)t]);
  std::int64_t SG = remove_even ? SF - 2 * (std::int64_t)r : SF + 2 * (std::int64_t)r;
  return finish(BooleanFamily::from_bitset(n, std::move(bits)), r, SG);
}

BooleanFamily noised_dictatorship(const NoiseSpec& spec) {
  BooleanFamily base =
      BooleanFamily::coset_union(spec.n, BooleanFamily::Axis::Row, spec.row, spec.columns)
          .materialize();
  RankBitset bits = base.bits();
  std::uint64_t nf = factorial(spec.n);
  Rng rng(spec.seed, 0x0150ULL);
  for (std::uint64_t k = 0; k < nf; ++k)
    if (rng.bernoulli(spec.delta)) bits.flip(k);
  std::uint64_t target = (std::uint64_t)spec.columns.size() * factorial(spec.n - 1);
  std::uint64_t cur = bits.count();
  if (cur != target) {
    std::vector<PermRank> pool;
    bool trim = cur > target;
    for (std::uint64_t k = 0; k < nf; ++k)
      if (bits.test(k) == trim) pool.push_back(k);
    rng.shuffle(pool);
    std::uint64_t need = trim ? cur - target : target - cur;
    for (std::uint64_t t = 0; t < need; ++t) {
      if (trim)
        bits.reset(pool[(std::size_t)t]);
      else
        bits.set(pool[(std::size_t)t]);
    }
  }
  return BooleanFamily::from_bitset(spec.n, std::move(bits));
}

std::vector<StabilityRow> stability_experiment(const NoiseSpec& base,
                                               const std::vector<double>& deltas, int trials,
                                               const RecoverOptions& opts) {
  std::uint64_t total = deltas.size() * (std::uint64_t)trials;
  std::vector<StabilityRow> rows((std::size_t)total);
  BooleanFamily truth =
      BooleanFamily::coset_union(base.n, BooleanFamily::Axis::Row, base.row, base.columns);
  double nf = (double)factorial(base.n);
  Rng master(base.seed, 0x57abULL);
  parallel_chunks(total, default_chunks(total), [&](int, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t slot = lo; slot < hi; ++slot) {
      std::size_t di = (std::size_t)(slot / (std::uint64_t)trials);
      int trial = (int)(slot % (std::uint64_t)trials);
      NoiseSpec spec = base;
      spec.delta = deltas[di];
      spec.seed = master.split(slot).next_u64();
      BooleanFamily fam = noised_dictatorship(spec);
      RecoverOptions ro = opts;
      ro.seed = spec.seed;
      RecoveryResult r = recover(fam, ro);
      StabilityRow& row = rows[(std::size_t)slot];
      row.delta = spec.delta;
      row.trial = trial;
      row.epsilon = r.epsilon;
      row.symdiff = r.symdiff_fraction;
      row.symdiff_truth = (double)symmetric_difference(r.G, truth) / nf;
      row.d = r.d;
      row.c = fam.density();
      row.eta = std::min(row.c, 1.0 - row.c);
      row.ratio = row.symdiff * row.eta /
                  (std::pow(std::max(r.epsilon, 0.0), 1.0 / 7.0) +
                   std::pow((double)base.n, -1.0 / 3.0));
      (void)trial;
    }
  });
  return rows;
}

}  // namespace snf
