#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cafpono {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must
// derive any randomness from their own index (see mix_seed) so the result
// is identical for every jobs value. The first exception thrown by a work
// item is rethrown on the calling thread after all threads join.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (count < 0) throw std::invalid_argument("parallel_for: negative count");
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  if (jobs > count) jobs = count;

  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(err);
}

inline int default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace cafpono
