// Deterministic trial-level parallelism: fn(0..n-1) runs on a small worker
// pool and results land in index order, so output never depends on
// scheduling.
#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mma {

template <typename T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& fn,
                            int num_threads = 0) {
  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (num_threads < 1) num_threads = 1;
  }
  num_threads = std::min(num_threads, std::max(n, 1));
  std::vector<T> results(n);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      results[i] = fn(i);
    }
  };
  if (num_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < num_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace mma
