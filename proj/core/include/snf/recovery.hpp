#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "snf/coeff.hpp"
#include "snf/family.hpp"
#include "snf/restriction.hpp"
#include "snf/strong_line.hpp"

namespace snf {

struct RecoverOptions {
  /// Large-entry threshold; default max(50 * eps^{1/7}, 3/n). The 3/n floor is
  /// the discretization scale of the coefficient matrix (row entries of an
  /// exact dictatorship sit within 3/n of the targets), so the clean case
  /// detects its own line.
  std::optional<double> large_threshold;
  /// Coset selection threshold on tau; default 1 - 26*eps^{1/7} (c = 1/2)
  /// or 1 - 51*eps^{1/7} (general c).
  std::optional<double> tau_threshold;
  double p_max = 0.5;  // direct-scan acceptance level
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 1'000'000;
  bool recursive_crosscheck = true;
};

class NoStrongLineError : public PipelineError {
 public:
  NoStrongLineError(const std::string& what, double best_p, double p_max, double threshold)
      : PipelineError(what), best_p(best_p), p_max(p_max), large_threshold(threshold) {}
  double best_p;
  double p_max;
  double large_threshold;
};

enum class TauCluster { ZeroOne, Gamma, MixedViolation };

struct MediumValueReport {
  double gamma = 0.0;
  bool gamma_far = false;  // gamma 156*eps^{1/7}-far from {0,1}
  TauCluster cluster = TauCluster::ZeroOne;
  int reasonable_count = 0;
};

struct RecoveryResult {
  BooleanFamily G;  // single-row or single-column coset union
  double d = 0.0;   // |cosets| / n
  double symdiff_fraction = 0.0;  // |F xor G| / n!
  StrongLineReport strong_line;
  double epsilon = 0.0;
  EpsilonKind epsilon_kind = EpsilonKind::Exact;
  double epsilon_stderr = 0.0;
  double c = 0.0;
  double large_threshold_used = 0.0;
  double tau_threshold_used = 0.0;
  std::optional<StrongLineReport> recursive_check;
  std::optional<MediumValueReport> medium;
};

/// Reconstruct the approximating dictatorship: coefficient matrix, epsilon,
/// strong-line detection (direct primary, recursive cross-check when the
/// matrix is q-good enough), medium-value screening for c != 1/2, then coset
/// selection on the line by tau threshold.
RecoveryResult recover(const BooleanFamily& F, const RecoverOptions& opts = {});

/// Entry a at `pos` on the strong line is reasonable when it is large, the
/// probability r that a random generalized diagonal through it is good is
/// >= 4/5, and f_1 restricted to its 1-coset is (1/5, eps^{1/7})-almost
/// Boolean. Exact for n <= kMaxDenseN, sampled beyond.
bool reasonable(const CoefficientMatrix& M, const BoolMatrix& L, Line line, int pos,
                const GoodnessParams& params, Rng* rng = nullptr);

/// Lemma-style dichotomy of the reasonable tau entries on the strong line:
/// all close to gamma, or none. Mixed occurrences are reported as violations.
MediumValueReport medium_value_check(const std::vector<double>& tau_line,
                                     const std::vector<char>& reasonable_mask, double c,
                                     const GoodnessParams& params);

struct InjectResult {
  BooleanFamily H;
  std::uint64_t moved = 0;      // |F xor H|
  double sign_corr = 0.0;       // <h, sgn>
  bool certified = false;       // sign_corr^2 >= upsilon
};

/// Error injection: remove floor(sqrt(upsilon) n!) same-parity permutations
/// (majority parity) unless F already certifies <f,sgn>^2 >= upsilon; families
/// below half density are handled through the complement. upsilon <= 1/16.
InjectResult inject_error(const BooleanFamily& F, double upsilon, Rng& rng);

struct NoiseSpec {
  int n = 0;
  int row = 0;                // dictatorship line (row)
  std::vector<int> columns;   // its coset columns
  double delta = 0.0;         // membership flip probability
  std::uint64_t seed = 0;
};

/// Flip each rank with probability delta, then rebalance to the exact target
/// size by random swaps.
BooleanFamily noised_dictatorship(const NoiseSpec& spec);

struct StabilityRow {
  double delta = 0.0;
  int trial = 0;
  double epsilon = 0.0;
  double symdiff = 0.0;        // |G xor F| / n!
  double symdiff_truth = 0.0;  // |G xor truth| / n!
  double d = 0.0;
  double c = 0.0;
  double eta = 0.0;
  double ratio = 0.0;  // symdiff * eta / (eps^{1/7} + n^{-1/3})
};

std::vector<StabilityRow> stability_experiment(const NoiseSpec& base,
                                               const std::vector<double>& deltas, int trials,
                                               const RecoverOptions& opts = {});

}  // namespace snf
