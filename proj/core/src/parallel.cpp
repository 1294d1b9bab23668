#include "snf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace snf {

namespace {
std::atomic<int> g_threads{0};
thread_local bool t_in_worker = false;
}

void set_thread_count(int threads) { g_threads.store(threads < 0 ? 0 : threads); }

int thread_count() {
  int t = g_threads.load();
  if (t == 0) {
    unsigned hc = std::thread::hardware_concurrency();
    t = hc == 0 ? 1 : (int)hc;
  }
  return t;
}

int default_chunks(std::uint64_t total) {
  if (total < 4096) return 1;
  return 64;
}

void parallel_chunks(std::uint64_t total, int chunks,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  if (total == 0 || chunks <= 0) return;
  if ((std::uint64_t)chunks > total) chunks = (int)total;
  auto range = [&](int c) {
    std::uint64_t lo = total * (std::uint64_t)c / (std::uint64_t)chunks;
    std::uint64_t hi = total * (std::uint64_t)(c + 1) / (std::uint64_t)chunks;
    return std::pair<std::uint64_t, std::uint64_t>(lo, hi);
  };
  int workers = std::min(thread_count(), chunks);
  if (workers <= 1 || t_in_worker) {
    for (int c = 0; c < chunks; ++c) {
      auto [lo, hi] = range(c);
      fn(c, lo, hi);
    }
    return;
  }
  std::atomic<int> next{0};
  auto work = [&] {
    t_in_worker = true;
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks) break;
      auto [lo, hi] = range(c);
      fn(c, lo, hi);
    }
    t_in_worker = false;
  };
  std::vector<std::thread> pool;
  pool.reserve((std::size_t)workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

double tree_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  std::size_t half = xs.size() / 2;
  return tree_sum(xs.first(half)) + tree_sum(xs.subspan(half));
}

double BlockSum::total() const {
  std::vector<double> all = blocks_;
  all.push_back(acc_);
  return tree_sum(all);
}

}  // namespace snf
