#pragma once

// Compensated accumulation and a deterministic parallel loop. Monte Carlo
// reductions are chunked with a fixed chunk size and merged in index order, so
// results do not depend on the number of worker threads.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace spde {

// Neumaier-compensated sum.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Mean and standard error of a sample accumulated one value at a time.
class MomentAccumulator {
 public:
  void add(double x) {
    sum_.add(x);
    sum_sq_.add(x * x);
    ++count_;
  }
  std::size_t count() const { return count_; }
  double mean() const { return count_ ? sum_.value() / static_cast<double>(count_) : 0.0; }
  double variance() const {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double m = mean();
    const double v = (sum_sq_.value() - n * m * m) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  double standard_error() const {
    return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }
  void merge(const MomentAccumulator& other) {
    sum_.add(other.sum_.value());
    sum_sq_.add(other.sum_sq_.value());
    count_ += other.count_;
  }

 private:
  KahanSum sum_;
  KahanSum sum_sq_;
  std::size_t count_ = 0;
};

// Runs fn(i) for i in [0, n). Work is split into fixed-size chunks claimed by
// an atomic counter; fn writes only to its own index, so the schedule cannot
// affect the result.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t chunk = 64) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = hw > 1 ? hw : 1;
  if (workers == 1 || n <= chunk) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::size_t end = begin + chunk < n ? begin + chunk : n;
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace spde
