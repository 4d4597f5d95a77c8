#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cyclesync {

// Static block partition over [0, n).  Work is split the same way for any
// thread count; determinism comes from order-independent reductions and
// per-iteration RNG substreams, not from the schedule.
class ThreadPool {
 public:
  explicit ThreadPool(int threads) : threads_(std::max(1, threads)) {}

  int size() const { return threads_; }

  // fn(begin, end, worker) over a contiguous block.
  void run_blocks(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t, int)>& fn) const {
    if (n <= 0) return;
    int workers = static_cast<int>(std::min<std::int64_t>(threads_, n));
    if (workers <= 1) {
      fn(0, n, 0);
      return;
    }
    std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> crew;
    crew.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) {
      std::int64_t b = w * chunk;
      std::int64_t e = std::min<std::int64_t>(n, b + chunk);
      if (b >= e) break;
      crew.emplace_back([&fn, b, e, w] { fn(b, e, w); });
    }
    fn(0, std::min<std::int64_t>(n, chunk), 0);
    for (auto& t : crew) t.join();
  }

  template <class F>
  void parallel_for(std::int64_t n, F&& fn) const {
    run_blocks(n, [&fn](std::int64_t b, std::int64_t e, int w) {
      for (std::int64_t i = b; i < e; ++i) fn(i, w);
    });
  }

 private:
  int threads_;
};

// Default thread count: CYCLESYNC_THREADS if set, else hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("CYCLESYNC_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace cyclesync
