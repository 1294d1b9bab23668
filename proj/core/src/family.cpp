#include "snf/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "snf/errors.hpp"
#include "snf/parallel.hpp"

namespace snf {

RealFunction::RealFunction(int n, double fill) : n_(n) {
  if (n < 1 || n > kMaxDenseN)
    throw CapacityError("RealFunction: dense storage requires n <= " + std::to_string(kMaxDenseN));
  values_.assign(factorial(n), fill);
}

double RealFunction::mean() const {
  BlockSum s;
  for (double v : values_) s.add(v);
  return s.total() / (double)values_.size();
}

double RealFunction::norm2() const {
  BlockSum s;
  for (double v : values_) s.add(v * v);
  return std::sqrt(s.total() / (double)values_.size());
}

double inner_product(const RealFunction& f, const RealFunction& g) {
  if (f.n() != g.n()) throw std::invalid_argument("inner_product: mismatched n");
  BlockSum s;
  const auto& fv = f.values();
  const auto& gv = g.values();
  for (std::size_t i = 0; i < fv.size(); ++i) s.add(fv[i] * gv[i]);
  return s.total() / (double)fv.size();
}

double sign_correlation(const RealFunction& f) {
  BlockSum s;
  enumerate_permutations(f.n(), [&](PermRank k, const std::vector<int>& im) {
    s.add((double)sign_of_images(im) * f[k]);
  });
  return s.total() / (double)f.domain_size();
}

// ---------------------------------------------------------------------------

BooleanFamily BooleanFamily::from_bitset(int n, RankBitset bits) {
  if (n < 1 || n > kMaxDenseN) throw CapacityError("explicit family requires n <= 9");
  if (bits.size() != factorial(n)) throw std::invalid_argument("family bitset must have n! bits");
  BooleanFamily F;
  F.n_ = n;
  F.size_ = bits.count();
  F.explicit_ = std::move(bits);
  return F;
}

BooleanFamily BooleanFamily::empty_family(int n) { return coset_union(n, Axis::Row, 0, {}); }

BooleanFamily BooleanFamily::full_family(int n) {
  std::vector<int> all((std::size_t)n);
  for (int j = 0; j < n; ++j) all[(std::size_t)j] = j;
  return coset_union(n, Axis::Row, 0, std::move(all));
}

BooleanFamily BooleanFamily::coset_union(int n, Axis axis, int line, std::vector<int> cross) {
  return coset_union(n, axis, line, std::move(cross), {}, {});
}

BooleanFamily BooleanFamily::coset_union(int n, Axis axis, int line, std::vector<int> cross,
                                         std::vector<PermRank> added,
                                         std::vector<PermRank> removed) {
  if (n < 1 || n > kMaxN) throw CapacityError("symbolic family requires n <= 12");
  BooleanFamily F;
  F.n_ = n;
  F.axis_ = axis;
  F.line_ = line;
  std::sort(cross.begin(), cross.end());
  std::sort(added.begin(), added.end());
  std::sort(removed.begin(), removed.end());
  F.cross_ = std::move(cross);
  F.added_ = std::move(added);
  F.removed_ = std::move(removed);
  F.validate_symbolic();
  F.size_ = (std::uint64_t)F.cross_.size() * factorial(n - 1) + F.added_.size() - F.removed_.size();
  return F;
}

void BooleanFamily::validate_symbolic() const {
  if (line_ < 0 || line_ >= n_) throw std::invalid_argument("coset line index out of range");
  for (std::size_t i = 0; i < cross_.size(); ++i) {
    if (cross_[i] < 0 || cross_[i] >= n_) throw std::invalid_argument("coset index out of range");
    if (i > 0 && cross_[i] == cross_[i - 1])
      throw std::invalid_argument("coset indices must be distinct (disjointness)");
  }
  if (added_.size() > kMaxExceptions || removed_.size() > kMaxExceptions)
    throw CapacityError("exception list exceeds cap");
  auto check_list = [&](const std::vector<PermRank>& xs, bool must_be_inside, const char* what) {
    std::uint64_t nf = factorial(n_);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] >= nf) throw std::invalid_argument(std::string(what) + ": rank out of range");
      if (i > 0 && xs[i] == xs[i - 1])
        throw std::invalid_argument(std::string(what) + ": duplicate rank");
      Permutation p = Permutation::unrank(xs[i], n_);
      int where = (axis_ == Axis::Row) ? p(line_) : p.inverse()(line_);
      bool inside = std::binary_search(cross_.begin(), cross_.end(), where);
      if (inside != must_be_inside)
        throw std::invalid_argument(std::string(what) +
                                    (must_be_inside ? ": rank not inside coset union"
                                                    : ": rank already inside coset union"));
    }
  };
  check_list(added_, false, "added");
  check_list(removed_, true, "removed");
}

const RankBitset& BooleanFamily::bits() const {
  if (!explicit_) throw std::logic_error("bits(): family is symbolic");
  return *explicit_;
}

BooleanFamily::Axis BooleanFamily::axis() const {
  if (explicit_) throw std::logic_error("axis(): family is explicit");
  return axis_;
}
int BooleanFamily::line() const {
  if (explicit_) throw std::logic_error("line(): family is explicit");
  return line_;
}
const std::vector<int>& BooleanFamily::cross() const {
  if (explicit_) throw std::logic_error("cross(): family is explicit");
  return cross_;
}
const std::vector<PermRank>& BooleanFamily::added() const {
  if (explicit_) throw std::logic_error("added(): family is explicit");
  return added_;
}
const std::vector<PermRank>& BooleanFamily::removed() const {
  if (explicit_) throw std::logic_error("removed(): family is explicit");
  return removed_;
}

bool BooleanFamily::contains(const std::vector<int>& images) const {
  if ((int)images.size() != n_) throw std::invalid_argument("contains: mismatched n");
  if (explicit_) return explicit_->test(rank_of_images(images));
  bool base;
  if (axis_ == Axis::Row) {
    base = std::binary_search(cross_.begin(), cross_.end(), images[(std::size_t)line_]);
  } else {
    int pos = 0;
    while (images[(std::size_t)pos] != line_) ++pos;
    base = std::binary_search(cross_.begin(), cross_.end(), pos);
  }
  if (added_.empty() && removed_.empty()) return base;
  PermRank k = rank_of_images(images);
  if (base) return !std::binary_search(removed_.begin(), removed_.end(), k);
  return std::binary_search(added_.begin(), added_.end(), k);
}

bool BooleanFamily::contains_rank(PermRank k) const {
  if (explicit_) return explicit_->test(k);
  return contains_enumerated(k, Permutation::unrank(k, n_).images());
}

bool BooleanFamily::contains_enumerated(PermRank k, const std::vector<int>& images) const {
  if (explicit_) return explicit_->test(k);
  bool base;
  if (axis_ == Axis::Row) {
    base = std::binary_search(cross_.begin(), cross_.end(), images[(std::size_t)line_]);
  } else {
    int pos = 0;
    while (images[(std::size_t)pos] != line_) ++pos;
    base = std::binary_search(cross_.begin(), cross_.end(), pos);
  }
  if (base) return removed_.empty() || !std::binary_search(removed_.begin(), removed_.end(), k);
  return !added_.empty() && std::binary_search(added_.begin(), added_.end(), k);
}

std::uint64_t BooleanFamily::coset_count(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::invalid_argument("coset_count: bad index");
  if (explicit_) {
    std::uint64_t c = 0;
    explicit_->for_each_set([&](PermRank k) {
      if (Permutation::unrank(k, n_)(i) == j) ++c;
    });
    return c;
  }
  std::uint64_t base;
  bool on_line = (axis_ == Axis::Row) ? (i == line_) : (j == line_);
  int other = (axis_ == Axis::Row) ? j : i;
  if (on_line) {
    base = std::binary_search(cross_.begin(), cross_.end(), other) ? factorial(n_ - 1) : 0;
  } else {
    // Cosets sharing the queried row or column contribute nothing.
    std::uint64_t hits = cross_.size();
    if (std::binary_search(cross_.begin(), cross_.end(), other)) --hits;
    base = hits * factorial(n_ - 2);
  }
  std::uint64_t add = 0, sub = 0;
  for (PermRank k : added_)
    if (Permutation::unrank(k, n_)(i) == j) ++add;
  for (PermRank k : removed_)
    if (Permutation::unrank(k, n_)(i) == j) ++sub;
  return base + add - sub;
}

BooleanFamily BooleanFamily::materialize() const {
  if (explicit_) return *this;
  if (n_ > kMaxDenseN) throw CapacityError("materialize: n too large for explicit storage");
  RankBitset bits(factorial(n_));
  enumerate_permutations(n_, [&](PermRank k, const std::vector<int>& im) {
    if (contains_enumerated(k, im)) bits.set(k);
  });
  return from_bitset(n_, std::move(bits));
}

BooleanFamily BooleanFamily::complement() const {
  if (explicit_) return from_bitset(n_, explicit_->complemented());
  return materialize().complement();
}

RealFunction signed_indicator(const BooleanFamily& F) {
  if (F.n() > kMaxDenseN) throw CapacityError("signed_indicator: n too large to materialize");
  RealFunction f(F.n(), -1.0);
  BooleanFamily M = F.materialize();
  M.bits().for_each_set([&](PermRank k) { f[k] = 1.0; });
  return f;
}

std::uint64_t symmetric_difference(const BooleanFamily& A, const BooleanFamily& B) {
  if (A.n() != B.n()) throw std::invalid_argument("symmetric_difference: mismatched n");
  if (A.n() <= kMaxDenseN)
    return A.materialize().bits().count_xor(B.materialize().bits());
  // Both symbolic: |A| + |B| - 2|A ∩ B| with the intersection in closed form.
  std::uint64_t inter = 0;
  for (int x : B.cross()) {
    int i = (B.axis() == BooleanFamily::Axis::Row) ? B.line() : x;
    int j = (B.axis() == BooleanFamily::Axis::Row) ? x : B.line();
    inter += A.coset_count(i, j);
  }
  for (PermRank k : B.removed())
    if (A.contains_rank(k)) --inter;
  for (PermRank k : B.added())
    if (A.contains_rank(k)) ++inter;
  return A.size() + B.size() - 2 * inter;
}

BooleanFamily relabel(const BooleanFamily& F, const Permutation& sigma, const Permutation& rho) {
  if (sigma.n() != F.n() || rho.n() != F.n())
    throw std::invalid_argument("relabel: mismatched n");
  Permutation sigma_inv = sigma.inverse();
  auto map_rank = [&](PermRank k) {
    return rho.compose(Permutation::unrank(k, F.n())).compose(sigma_inv).rank();
  };
  if (F.is_explicit()) {
    RankBitset bits(factorial(F.n()));
    F.bits().for_each_set([&](PermRank k) { bits.set(map_rank(k)); });
    return BooleanFamily::from_bitset(F.n(), std::move(bits));
  }
  std::vector<int> cross;
  cross.reserve(F.cross().size());
  int new_line;
  if (F.axis() == BooleanFamily::Axis::Row) {
    new_line = sigma(F.line());
    for (int j : F.cross()) cross.push_back(rho(j));
  } else {
    new_line = rho(F.line());
    for (int i : F.cross()) cross.push_back(sigma(i));
  }
  std::vector<PermRank> added, removed;
  added.reserve(F.added().size());
  removed.reserve(F.removed().size());
  for (PermRank k : F.added()) added.push_back(map_rank(k));
  for (PermRank k : F.removed()) removed.push_back(map_rank(k));
  return BooleanFamily::coset_union(F.n(), F.axis(), new_line, std::move(cross), std::move(added),
                                    std::move(removed));
}

}  // namespace snf
