#pragma once

#include <cstdint>
#include <vector>

namespace snf {

/// Deterministic, platform-independent PRNG (SplitMix64 core). Streams are
/// derived from (seed, stream) so parallel workers can draw independently
/// while results stay reproducible regardless of thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + 0x9e3779b97f4a7c15ULL, stream)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, bound); bound > 0. Unbiased (Lemire with rejection).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = (unsigned __int128)next_u64() * bound;
    auto lo = (std::uint64_t)m;
    if (lo < bound) {
      std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = (unsigned __int128)next_u64() * bound;
        lo = (std::uint64_t)m;
      }
    }
    return (std::uint64_t)(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// n-bit mask with each bit set independently with probability 1/2.
  std::uint32_t subset_mask(int n) {
    return (std::uint32_t)(next_u64() & ((n >= 32) ? 0xffffffffu : ((1u << n) - 1u)));
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = (std::size_t)below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct elements of [0, n), in random order.
  std::vector<int> sample_distinct(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + (int)below((std::uint64_t)(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  /// Derive an independent stream deterministically.
  Rng split(std::uint64_t stream) const {
    Rng r(0);
    r.state_ = mix(state_, stream + 1);
    return r;
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace snf
