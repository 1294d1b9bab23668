#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "snf/family.hpp"
#include "snf/perm.hpp"

namespace snf {

enum class EpsilonKind { Exact, MonteCarlo };

/// Canonical U_1 representation of f = 2*chi_F - 1:
///   a_ij = (n-1)<f, T_ij> - ((n-2)/n)(2c-1),   f_1 = sum a_ij T_ij,
/// together with c = |F|/n! and epsilon = E[(f - f_1)^2].
struct CoefficientMatrix {
  int n = 0;
  std::vector<double> a;  // row-major n*n
  double c = 0.0;
  double epsilon = 0.0;
  EpsilonKind epsilon_kind = EpsilonKind::Exact;
  double epsilon_stderr = 0.0;

  double operator()(int i, int j) const { return a[(std::size_t)(i * n + j)]; }
  double& at(int i, int j) { return a[(std::size_t)(i * n + j)]; }
  double row_sum(int i) const;
  double col_sum(int j) const;
  double sum_squares() const;
};

struct MatrixOptions {
  std::uint64_t mc_samples = 1'000'000;  // epsilon sampling when exact is out of reach
  std::uint64_t seed = 0;
};

struct EpsilonEstimate {
  double value = 0.0;
  EpsilonKind kind = EpsilonKind::Exact;
  double stderr_ = 0.0;
};

/// |F ∩ T_ij| for all (i,j) in one pass.
std::vector<std::uint64_t> coset_counts(const BooleanFamily& F);

CoefficientMatrix coefficient_matrix(const BooleanFamily& F, const MatrixOptions& opts = {});

/// f_1(p) = sum_i a_{i p(i)} (generalized diagonal sum).
double evaluate_f1(const CoefficientMatrix& M, const Permutation& p);
double evaluate_f1(const CoefficientMatrix& M, const std::vector<int>& images);

/// E[(f - f_1)^2]: exact by full enumeration for n <= kMaxDenseN, Monte Carlo
/// otherwise. The matrix must belong to F.
EpsilonEstimate distance_to_u1(const BooleanFamily& F, const CoefficientMatrix& M,
                               const MatrixOptions& opts = {});

struct IdentityReport {
  double max_row_violation = 0.0;  // |row sum - (2c-1)|
  double max_col_violation = 0.0;
  double sum_sq_violation = 0.0;   // |sum a^2 - ((n-1)(1-eps) - (n-2)(2c-1)^2)|
  double max_abs_entry = 0.0;
  int bound_violations = 0;        // entries with |a_ij| > 1 + 1e-9 (reported, not enforced)
};

/// Exact-path identity checks; requires epsilon_kind == Exact.
IdentityReport verify_identities(const CoefficientMatrix& M);

/// tau_ij = |F ∩ T_ij| / (n-1)!.
struct TauMatrix {
  int n = 0;
  std::vector<double> tau;
  double c = 0.0;
  double operator()(int i, int j) const { return tau[(std::size_t)(i * n + j)]; }
  double row_sum(int i) const;
};

TauMatrix tau_matrix(const BooleanFamily& F);
/// tau_ij = (2(n-2)c + 1) / (2(n-1)) + (n / (2(n-1))) a_ij.
TauMatrix tau_from_a(const CoefficientMatrix& M);

/// Least-squares projector onto span{T_IJ : |I| = |J| = t} (t <= 2).
/// Normal equations on the Gram matrix with a tiny ridge; the T_IJ are
/// linearly dependent, the span is what matters.
class UtProjector {
 public:
  UtProjector(int n, int t);
  ~UtProjector();
  UtProjector(UtProjector&&) noexcept;
  RealFunction project(const RealFunction& f) const;
  int n() const { return n_; }
  int t() const { return t_; }

 private:
  struct Impl;
  int n_, t_;
  std::unique_ptr<Impl> impl_;
};

RealFunction project_ut(const RealFunction& f, int t);

/// Smallest t in {0,1,2} with ||f - P_t f||_2 <= tol; nullopt means "> 2".
/// tol < 0 selects the default 1e-6 * ||f||_2.
std::optional<int> degree(const RealFunction& f, double tol = -1.0);

}  // namespace snf
