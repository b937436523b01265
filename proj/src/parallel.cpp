// SPDX-License-Identifier: Apache-2.0
#include "bunching/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace bunching {

int default_thread_cap() {
  if (const char* env = std::getenv("BUNCHSIM_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (...) {
      // fall through to hardware default on malformed values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int resolve_threads(int requested) {
  if (requested <= 0) return default_thread_cap();
  return requested;
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                        int threads) {
  if (count == 0) return;
  const int workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bunching
