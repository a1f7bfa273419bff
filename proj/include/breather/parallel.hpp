// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace breather {

// Worker count from BREATHER_THREADS (default 1, clamped to hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, n); each index writes only its own output slot, so
// results do not depend on the worker count. The first exception is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace breather
