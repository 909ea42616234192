#pragma once

#include <cstddef>
#include <functional>

namespace aubry {

/// Worker count from AUBRY_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is
/// processed exactly once, so results never depend on the worker count as
/// long as body only writes state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace aubry
