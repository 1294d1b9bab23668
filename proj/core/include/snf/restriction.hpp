#pragma once

#include <cstdint>
#include <vector>

#include "snf/coeff.hpp"
#include "snf/perm.hpp"
#include "snf/rng.hpp"

namespace snf {

/// A pair (X, Y) of equal-size subsets of [n], as bitmasks. Stands for the
/// event pi(X) = Y.
struct Restriction {
  int n = 0;
  std::uint32_t X = 0;
  std::uint32_t Y = 0;
};

/// Distribution R: each i lands in X with probability 1/2 independently,
/// then Y is uniform among the subsets of size |X|.
Restriction sample_restriction(int n, Rng& rng);

/// m(X,Y) = (1/|X|) sum_{i in X, j in Y} a_ij; defined as 0 for empty X.
double restriction_mean(const CoefficientMatrix& M, const Restriction& r);

struct MomentCheck {
  double mean_hat = 0.0;
  double var_hat = 0.0;
  double mean_stderr = 0.0;
  double var_stderr = 0.0;
  bool var_bound_ok = false;  // var_hat <= 1/(2n) + 3*var_stderr
  std::uint64_t samples = 0;
};

/// Monte Carlo moments of m under R. Requires samples >= 1000.
MomentCheck moment_check(const CoefficientMatrix& M, std::uint64_t samples, Rng& rng);

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Closed-form E_R[m] and V_R[m] (with the m(empty) = 0 convention, hence the
/// 2^-n correction). Valid for matrices produced by coefficient_matrix.
ExactMoments restriction_moments_closed_form(const CoefficientMatrix& M);

/// g1 = sum over the X-part of p's diagonal, g2 the complement part.
/// Requires p(X) = Y; g1 + g2 = f_1(p) exactly.
std::pair<double, double> decompose_g(const CoefficientMatrix& M, const Restriction& r,
                                      const Permutation& p);

/// Thresholds derived from (epsilon, c). All epsilon powers are floored at
/// 1e-9 so the predicates stay total at epsilon = 0.
struct GoodnessParams {
  double epsilon = 0.0;
  double c = 0.5;
  double eps17 = 0.0;            // max(epsilon^{1/7}, floor)
  double tol_center = 0.0;       // 25 * eps17
  double large_threshold = 0.0;  // 50 * eps17
  static GoodnessParams from(double epsilon, double c);
};

struct TypicalityReport {
  bool a_ok = false, b_ok = false, c_ok = false;
  double boolean_fail_prob = 0.0;  // Pr[| |g| - 1 | > eps^{1/7}]
  double e_g1 = 0.0, e_g2 = 0.0;
  double l2_deviation = 0.0;  // E[(|g| - 1)^2]
};

/// Exact check of the three typicality properties over T_{X,Y}.
TypicalityReport typicality(const CoefficientMatrix& M, const Restriction& r,
                            const GoodnessParams& params);

/// Partition goodness: P1 near c - 1/2 and P2 near {-c-1/2, 3/2-c}, or the
/// roles swapped, at tolerance tol_center.
bool partition_good(const CoefficientMatrix& M, const Permutation& p, std::uint32_t X,
                    const GoodnessParams& params);

struct PermutationGoodness {
  double fraction = 0.0;
  double stderr_ = 0.0;
  bool is_good = false;  // fraction >= 4/5
};

/// partition_samples == 0 enumerates all 2^n partitions exactly; otherwise
/// Monte Carlo with partition_samples >= 100.
PermutationGoodness permutation_good(const CoefficientMatrix& M, const Permutation& p,
                                     const GoodnessParams& params, std::uint64_t partition_samples,
                                     Rng& rng);

struct DiagonalStructure {
  int large_count = 0;
  int large_position = -1;  // position of the unique large entry when large_count == 1
  double max_small = 0.0;   // max |a_{i p(i)}| over non-large entries
  bool conforms = false;    // large_count == 1 and max_small <= threshold
};

/// Classifies the generalized diagonal of p: large entries are those with
/// |a| within large_threshold of {2c, 2(1-c)}.
DiagonalStructure diagonal_structure(const CoefficientMatrix& M, const Permutation& p,
                                     const GoodnessParams& params);

}  // namespace snf
