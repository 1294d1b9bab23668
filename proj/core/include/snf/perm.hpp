#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace snf {

using PermRank = std::uint64_t;

/// Hard size limits. Ranks are Lehmer-code indices, so everything is capped
/// where n! stops being addressable in practice.
inline constexpr int kMaxN = 12;       // rank/unrank and symbolic families
inline constexpr int kMaxDenseN = 9;   // dense n!-sized storage

/// n! for 0 <= n <= 20.
std::uint64_t factorial(int n);

/// A permutation of {0,...,n-1} stored as its image array.
/// Immutable after construction; ranks are lexicographic on image arrays.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);
  static Permutation unrank(PermRank k, int n);

  PermRank rank() const;
  int n() const { return (int)images_.size(); }
  int operator()(int i) const { return images_[(std::size_t)i]; }
  const std::vector<int>& images() const { return images_; }

  /// (a.compose(b))(i) = a(b(i)).
  Permutation compose(const Permutation& b) const;
  Permutation inverse() const;
  int sign() const;  // +1 or -1

  bool operator==(const Permutation& o) const { return images_ == o.images_; }

 private:
  struct unchecked_t {};
  Permutation(std::vector<int> images, unchecked_t) : images_(std::move(images)) {}
  std::vector<int> images_;
};

/// All n(n-1)/2 neighbors {tau . a} of a in the transposition Cayley graph
/// (tau ranges over value transpositions; left multiplication).
std::vector<Permutation> transposition_neighbors(const Permutation& a);

/// Streams permutations of [0,n) with ranks in [lo, hi), in rank order.
/// The callback receives (rank, images). Ranges allow partitioned iteration.
void enumerate_permutations(int n, PermRank lo, PermRank hi,
                            const std::function<void(PermRank, const std::vector<int>&)>& fn);
void enumerate_permutations(int n,
                            const std::function<void(PermRank, const std::vector<int>&)>& fn);

/// Lexicographic rank of an image array (Lehmer code, mixed radix).
PermRank rank_of_images(const std::vector<int>& images);

int sign_of_images(const std::vector<int>& images);

}  // namespace snf
