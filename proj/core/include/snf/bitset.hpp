#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace snf {

/// Dynamic bitset sized for n! ranks.
class RankBitset {
 public:
  RankBitset() = default;
  explicit RankBitset(std::uint64_t size, bool value = false)
      : size_(size), w_((size + 63) / 64, value ? ~0ULL : 0ULL) {
    trim();
  }

  std::uint64_t size() const { return size_; }

  bool test(std::uint64_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(std::uint64_t i) { w_[i >> 6] |= 1ULL << (i & 63); }
  void reset(std::uint64_t i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  void flip(std::uint64_t i) { w_[i >> 6] ^= 1ULL << (i & 63); }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : w_) c += (std::uint64_t)std::popcount(w);
    return c;
  }

  RankBitset& operator&=(const RankBitset& o) { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a & b; }); }
  RankBitset& operator|=(const RankBitset& o) { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a | b; }); }
  RankBitset& operator^=(const RankBitset& o) { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a ^ b; }); }

  RankBitset complemented() const {
    RankBitset r(*this);
    for (auto& w : r.w_) w = ~w;
    r.trim();
    return r;
  }

  std::uint64_t count_xor(const RankBitset& o) const {
    check(o);
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += (std::uint64_t)std::popcount(w_[i] ^ o.w_[i]);
    return c;
  }

  std::uint64_t count_and(const RankBitset& o) const {
    check(o);
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += (std::uint64_t)std::popcount(w_[i] & o.w_[i]);
    return c;
  }

  void for_each_set(const std::function<void(std::uint64_t)>& fn) const {
    for (std::size_t b = 0; b < w_.size(); ++b) {
      std::uint64_t w = w_[b];
      while (w) {
        int bit = std::countr_zero(w);
        fn(((std::uint64_t)b << 6) + (std::uint64_t)bit);
        w &= w - 1;
      }
    }
  }

  bool operator==(const RankBitset& o) const { return size_ == o.size_ && w_ == o.w_; }

 private:
  template <class Op>
  RankBitset& apply(const RankBitset& o, Op op) {
    check(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = op(w_[i], o.w_[i]);
    return *this;
  }
  void check(const RankBitset& o) const {
    if (size_ != o.size_) throw std::invalid_argument("bitset size mismatch");
  }
  void trim() {
    if (size_ & 63) w_.back() &= (1ULL << (size_ & 63)) - 1;
  }

  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace snf
