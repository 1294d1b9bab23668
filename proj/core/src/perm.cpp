#include "snf/perm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "snf/errors.hpp"

namespace snf {

std::uint64_t factorial(int n) {
  static const std::uint64_t table[] = {
      1ULL,
      1ULL,
      2ULL,
      6ULL,
      24ULL,
      120ULL,
      720ULL,
      5040ULL,
      40320ULL,
      362880ULL,
      3628800ULL,
      39916800ULL,
      479001600ULL,
      6227020800ULL,
      87178291200ULL,
      1307674368000ULL,
      20922789888000ULL,
      355687428096000ULL,
      6402373705728000ULL,
      121645100408832000ULL,
      2432902008176640000ULL,
  };
  if (n < 0 || n > 20) throw std::out_of_range("factorial: n out of range");
  return table[n];
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  int n = (int)images_.size();
  if (n < 1 || n > kMaxN)
    throw std::invalid_argument("permutation: n must be in [1, " + std::to_string(kMaxN) + "]");
  std::uint32_t seen = 0;
  for (int v : images_) {
    if (v < 0 || v >= n || (seen >> v) & 1u)
      throw std::invalid_argument("not a permutation: images must be a bijection on [0,n)");
    seen |= 1u << v;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> im((std::size_t)n);
  for (int i = 0; i < n; ++i) im[(std::size_t)i] = i;
  return Permutation(std::move(im));
}

Permutation Permutation::unrank(PermRank k, int n) {
  if (n < 1 || n > kMaxN) throw CapacityError("unrank: n out of range");
  if (k >= factorial(n)) throw std::out_of_range("unrank: rank >= n!");
  std::vector<int> pool((std::size_t)n);
  for (int i = 0; i < n; ++i) pool[(std::size_t)i] = i;
  std::vector<int> im((std::size_t)n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t f = factorial(n - 1 - i);
    auto d = (std::size_t)(k / f);
    k %= f;
    im[(std::size_t)i] = pool[d];
    pool.erase(pool.begin() + (std::ptrdiff_t)d);
  }
  return Permutation(std::move(im), unchecked_t{});
}

PermRank rank_of_images(const std::vector<int>& images) {
  int n = (int)images.size();
  PermRank r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (images[(std::size_t)j] < images[(std::size_t)i]) ++smaller;
    r += (PermRank)smaller * factorial(n - 1 - i);
  }
  return r;
}

PermRank Permutation::rank() const { return rank_of_images(images_); }

Permutation Permutation::compose(const Permutation& b) const {
  if (n() != b.n()) throw std::invalid_argument("compose: mismatched n");
  std::vector<int> im((std::size_t)n());
  for (int i = 0; i < n(); ++i) im[(std::size_t)i] = images_[(std::size_t)b(i)];
  return Permutation(std::move(im), unchecked_t{});
}

Permutation Permutation::inverse() const {
  std::vector<int> im((std::size_t)n());
  for (int i = 0; i < n(); ++i) im[(std::size_t)images_[(std::size_t)i]] = i;
  return Permutation(std::move(im), unchecked_t{});
}

int sign_of_images(const std::vector<int>& images) {
  int n = (int)images.size();
  std::uint32_t visited = 0;
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    if ((visited >> i) & 1u) continue;
    int len = 0;
    for (int j = i; !((visited >> j) & 1u); j = images[(std::size_t)j]) {
      visited |= 1u << j;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

int Permutation::sign() const { return sign_of_images(images_); }

std::vector<Permutation> transposition_neighbors(const Permutation& a) {
  int n = a.n();
  std::vector<int> pos((std::size_t)n);  // pos[v] = index i with a(i) = v
  for (int i = 0; i < n; ++i) pos[(std::size_t)a(i)] = i;
  std::vector<Permutation> out;
  out.reserve((std::size_t)(n * (n - 1) / 2));
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      std::vector<int> im = a.images();
      std::swap(im[(std::size_t)pos[(std::size_t)x]], im[(std::size_t)pos[(std::size_t)y]]);
      out.push_back(Permutation(std::move(im)));
    }
  }
  return out;
}

void enumerate_permutations(int n, PermRank lo, PermRank hi,
                            const std::function<void(PermRank, const std::vector<int>&)>& fn) {
  if (n < 1 || n > kMaxN) throw CapacityError("enumerate: n out of range");
  std::uint64_t nf = factorial(n);
  if (lo > hi || hi > nf) throw std::out_of_range("enumerate: bad rank range");
  if (lo == hi) return;
  std::vector<int> im = Permutation::unrank(lo, n).images();
  for (PermRank k = lo; k < hi; ++k) {
    fn(k, im);
    std::next_permutation(im.begin(), im.end());
  }
}

void enumerate_permutations(int n,
                            const std::function<void(PermRank, const std::vector<int>&)>& fn) {
  enumerate_permutations(n, 0, factorial(n), fn);
}

}  // namespace snf
