#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snf/coeff.hpp"
#include "snf/errors.hpp"
#include "snf/rng.hpp"

namespace snf {

/// Large-entry test: |a_ij| within `threshold` of {2c, 2(1-c)}.
struct LargenessClassifier {
  double threshold = 0.0;
  double target_a = 1.0;  // 2c
  double target_b = 1.0;  // 2(1-c)
  double epsilon = 0.0;
  double c = 0.5;

  /// Paper thresholds: 50 * eps^{1/7}, floored at 1e-9.
  static LargenessClassifier paper(double epsilon, double c);
  /// Explicit threshold override.
  static LargenessClassifier fixed(double threshold, double c);

  bool is_large(double a) const {
    double m = a < 0 ? -a : a;
    double da = m - target_a, db = m - target_b;
    if (da < 0) da = -da;
    if (db < 0) db = -db;
    return da <= threshold || db <= threshold;
  }
};

struct BoolMatrix {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> v;

  BoolMatrix() = default;
  BoolMatrix(int r, int c) : rows(r), cols(c), v((std::size_t)(r * c), 0) {}
  bool at(int i, int j) const { return v[(std::size_t)(i * cols + j)] != 0; }
  void set(int i, int j, bool b) { v[(std::size_t)(i * cols + j)] = b ? 1 : 0; }
  BoolMatrix submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const;
};

BoolMatrix classify(const CoefficientMatrix& M, const LargenessClassifier& cls);

/// Permanent of a 0/1 matrix given as row bitmasks over [0, m); Ryser with
/// Gray-code updates, exact for m <= 14 (fits uint64).
std::uint64_t permanent01(const std::vector<std::uint32_t>& row_masks);

/// Fraction of generalized diagonals with exactly one large entry.
/// Exact (permanent-based) for m <= 14.
double good_diagonal_fraction_exact(const BoolMatrix& L);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

McEstimate good_diagonal_fraction_mc(const BoolMatrix& L, std::uint64_t samples, Rng& rng);

enum class LineKind { Row, Column };

struct Line {
  LineKind kind = LineKind::Row;
  int index = 0;
  bool operator==(const Line&) const = default;
};

enum class DetectMethod { Direct, Recursive };

struct StrongLineReport {
  LineKind kind = LineKind::Row;
  int index = 0;
  double strength_p = 1.0;  // fraction of non-large entries on the line
  double q_good = -1.0;     // measured q of the full matrix; < 0 if not measured
  DetectMethod method = DetectMethod::Direct;
  bool degraded = false;
  std::vector<std::string> trace;
};

/// Line with the smallest non-large fraction, if it is <= p_max.
/// Ties: Row before Column, lowest index.
std::optional<StrongLineReport> find_strong_line_direct(const BoolMatrix& L, double p_max);

struct RecursiveOptions {
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 20000;   // goodness measurement above the exact limit
  int fallback_candidates = 1000;     // sampled Y' candidates when enumeration is off
  double q_slack_sigmas = 3.0;        // Monte Carlo acceptance slack
};

/// Two misaligned strong lines whose non-conflicting large pairs contradict
/// the measured goodness level.
class ConflictingLinesError : public PipelineError {
 public:
  ConflictingLinesError(Line a, Line b, std::uint64_t pairs, const std::string& what)
      : PipelineError(what), line1(a), line2(b), non_conflicting(pairs) {}
  Line line1, line2;
  std::uint64_t non_conflicting;
};

/// Recursive halving detection: base-case exact scan when m < 1/(4q),
/// otherwise split the rows, find a q-good half via greedy-then-exhaustive
/// (or sampled) Y' search, and recurse; three independent splits vote, the
/// result is expanded to the full matrix and bootstrap-checked.
StrongLineReport find_strong_line_recursive(const BoolMatrix& L, double q,
                                            const RecursiveOptions& opts = {});

/// Number of non-conflicting large pairs between two distinct lines
/// (cells conflict when they share a row or a column).
std::uint64_t conflict_count(const BoolMatrix& L, Line a, Line b);

}  // namespace snf
