#pragma once

#include <cstddef>
#include <functional>

namespace dcproj {

/// Number of worker threads to use when the caller asks for "all processors".
unsigned default_jobs();

/// Calls fn(i) for every i in [0, n) using up to `jobs` threads. Each call
/// must only write to state owned by index i, so results never depend on
/// the thread count. If any call throws, the exception from the lowest
/// failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace dcproj
