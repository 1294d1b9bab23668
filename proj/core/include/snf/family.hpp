#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "snf/bitset.hpp"
#include "snf/perm.hpp"

namespace snf {

/// Dense real-valued function on S_n, indexed by rank. Requires n <= kMaxDenseN.
class RealFunction {
 public:
  RealFunction(int n, double fill = 0.0);
  static RealFunction constant(int n, double v) { return RealFunction(n, v); }

  int n() const { return n_; }
  std::uint64_t domain_size() const { return values_.size(); }
  double operator[](PermRank k) const { return values_[k]; }
  double& operator[](PermRank k) { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

  double mean() const;
  double norm2() const;  // sqrt(E[f^2])

 private:
  int n_;
  std::vector<double> values_;
};

/// <f,g> = (1/n!) sum f(pi) g(pi). Deterministic blockwise summation.
double inner_product(const RealFunction& f, const RealFunction& g);

/// <f, sgn>.
double sign_correlation(const RealFunction& f);

inline constexpr std::uint64_t kMaxExceptions = 1'000'000;

/// A subset of S_n. Either an explicit bitset over ranks (n <= kMaxDenseN) or
/// a symbolic union of pairwise-disjoint 1-cosets sharing one row or column,
/// with added/removed exception rank lists.
class BooleanFamily {
 public:
  enum class Axis { Row, Column };

  static BooleanFamily from_bitset(int n, RankBitset bits);
  static BooleanFamily empty_family(int n);
  static BooleanFamily full_family(int n);
  /// Union of T_{line,j} for j in cross (Axis::Row), or T_{i,line} (Axis::Column).
  static BooleanFamily coset_union(int n, Axis axis, int line, std::vector<int> cross);
  static BooleanFamily coset_union(int n, Axis axis, int line, std::vector<int> cross,
                                   std::vector<PermRank> added, std::vector<PermRank> removed);

  int n() const { return n_; }
  std::uint64_t size() const { return size_; }
  double density() const { return (double)size_ / (double)factorial(n_); }  // c
  bool is_explicit() const { return explicit_.has_value(); }

  const RankBitset& bits() const;  // explicit only

  bool contains(const std::vector<int>& images) const;
  bool contains(const Permutation& p) const { return contains(p.images()); }
  bool contains_rank(PermRank k) const;
  /// Membership when both the rank and the images are already known
  /// (enumeration loops); avoids recomputing either.
  bool contains_enumerated(PermRank k, const std::vector<int>& images) const;

  /// |F intersect T_ij| (zero-based i, j). Closed form on the symbolic path.
  std::uint64_t coset_count(int i, int j) const;

  BooleanFamily materialize() const;  // explicit copy; n <= kMaxDenseN
  BooleanFamily complement() const;

  // Symbolic accessors (throw if explicit).
  Axis axis() const;
  int line() const;
  const std::vector<int>& cross() const;
  const std::vector<PermRank>& added() const;
  const std::vector<PermRank>& removed() const;

 private:
  BooleanFamily() = default;
  void validate_symbolic() const;

  int n_ = 0;
  std::uint64_t size_ = 0;
  std::optional<RankBitset> explicit_;
  // symbolic representation
  Axis axis_ = Axis::Row;
  int line_ = 0;
  std::vector<int> cross_;            // sorted, distinct
  std::vector<PermRank> added_;       // sorted, distinct, disjoint from coset union
  std::vector<PermRank> removed_;     // sorted, distinct, inside coset union
};

/// f = 2*chi_F - 1 as a dense function (n <= kMaxDenseN).
RealFunction signed_indicator(const BooleanFamily& F);

/// |A xor B| as a set. Uses closed forms where both sides are symbolic.
std::uint64_t symmetric_difference(const BooleanFamily& A, const BooleanFamily& B);

/// {rho . pi . sigma^-1 : pi in F}; relabels positions by sigma, values by rho.
BooleanFamily relabel(const BooleanFamily& F, const Permutation& sigma, const Permutation& rho);

}  // namespace snf
