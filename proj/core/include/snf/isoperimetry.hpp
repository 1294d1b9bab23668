#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "snf/family.hpp"
#include "snf/recovery.hpp"

namespace snf {

/// Neighbor ranks in the transposition Cayley graph, for all of S_n.
/// Built once per n and cached (row v holds the n(n-1)/2 neighbors of rank v).
class TranspositionGraph {
 public:
  static const TranspositionGraph& get(int n);
  int n() const { return n_; }
  int degree() const { return degree_; }
  const std::uint32_t* neighbors(std::uint64_t rank) const {
    return adj_.data() + rank * (std::uint64_t)degree_;
  }

 private:
  explicit TranspositionGraph(int n);
  int n_, degree_;
  std::vector<std::uint32_t> adj_;
};

/// |edges between F and its complement|. Explicit families count exactly;
/// pure symbolic coset unions (no exception lists) use the closed form
/// |F| * (n - |cross|).
std::uint64_t edge_boundary(const BooleanFamily& F);

struct BoundaryReport {
  std::uint64_t size = 0;
  std::uint64_t boundary = 0;
  double c = 0.0;
  double bound = 0.0;   // (1-c) n |F|
  double slack = 0.0;   // boundary - bound (>= 0 by the isoperimetric inequality)
  double delta0 = 0.0;  // |dF| = (1 - c + delta0) n |F|
  bool equality = false;
};

BoundaryReport diaconis_check(const BooleanFamily& F);

struct IsoStability {
  BoundaryReport boundary;
  double eps_chi_bound = 0.0;   // n/(n-2) * c * delta0, in the 0/1 convention
  double eps_chi_actual = 0.0;  // epsilon / 4 (the 0/1-convention distance)
  double eps_pm1 = 0.0;         // E[(f - f_1)^2] for f = 2 chi - 1
  RecoveryResult recovery;
};

/// Full stability chain: boundary excess delta0, the spectral bound on the
/// 0/1-convention distance (checked, with the factor-4 conversion explicit),
/// and the recovered dictatorship.
IsoStability iso_stability(const BooleanFamily& F, const RecoverOptions& opts = {});

/// First k permutations of S_n in lexicographic order (= rank order).
BooleanFamily lex_segment(int n, std::uint64_t k);

enum class ScanMode { Exhaustive, LocalSearch };

struct LocalSearchParams {
  int restarts = 64;
  int patience = 500;  // consecutive non-improving swap attempts before stopping
  std::uint64_t seed = 0;
};

struct ConjectureRow {
  std::uint64_t k = 0;
  std::uint64_t lex_boundary = 0;
  std::uint64_t best_boundary = 0;
  bool improved = false;                  // best < lex
  std::optional<RankBitset> witness;      // present when improved
};

/// Per-size minimum edge boundary versus the lex segment. Exhaustive mode
/// scans all 2^(n!) subsets (n <= 4); LocalSearch runs seeded
/// first-improvement descent with restarts (n <= 8).
std::vector<ConjectureRow> conjecture_scan(int n, const std::vector<std::uint64_t>& sizes,
                                           ScanMode mode, const LocalSearchParams& params = {});

}  // namespace snf
