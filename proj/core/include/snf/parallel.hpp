#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace snf {

/// Global worker count. 0 means hardware concurrency. Thread count never
/// affects results: work is split into fixed chunks and merged in chunk order.
void set_thread_count(int threads);
int thread_count();

/// Splits [0, total) into `chunks` contiguous ranges and runs
/// fn(chunk_index, begin, end) for each, possibly on several threads.
/// fn must only write to per-chunk state.
void parallel_chunks(std::uint64_t total, int chunks,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

/// Number of chunks used for a workload of the given size (fixed policy so
/// reductions are deterministic).
int default_chunks(std::uint64_t total);

/// Pairwise (tree) summation; deterministic and more accurate than a running sum.
double tree_sum(std::span<const double> xs);

/// Deterministic blockwise accumulator: values are summed in fixed-size blocks
/// and the block sums reduced pairwise, independent of call pattern.
class BlockSum {
 public:
  void add(double x) {
    acc_ += x;
    if (++fill_ == kBlock) flush();
  }
  double total() const;

 private:
  static constexpr int kBlock = 4096;
  void flush() {
    blocks_.push_back(acc_);
    acc_ = 0.0;
    fill_ = 0;
  }
  double acc_ = 0.0;
  int fill_ = 0;
  std::vector<double> blocks_;
};

}  // namespace snf
