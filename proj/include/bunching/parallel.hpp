// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bunching {

/// Worker cap: BUNCHSIM_THREADS environment variable, else hardware concurrency.
int default_thread_cap();

/// 0 means "use the default cap"; result is always >= 1.
int resolve_threads(int requested);

/// Runs fn(i) for every i in [0, count). Each index owns its own output slot,
/// so results are identical for any worker count.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                        int threads = 0);

}  // namespace bunching
