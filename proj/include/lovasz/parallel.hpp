#pragma once

#include <cstddef>
#include <functional>

namespace lsv {

/// Worker count: hardware concurrency, capped by the LSV_THREADS environment
/// variable when set.
int thread_count();

/// Run fn(i) for i in [0, n) across worker threads. Results must go to
/// disjoint slots; the partition is static so output placement is
/// deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lsv
