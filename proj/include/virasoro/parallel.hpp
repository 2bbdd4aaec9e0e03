#pragma once

#include <cstddef>
#include <functional>

namespace vir {

/// Worker count: VIRASORO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) over a static partition. Output is
/// deterministic as long as body(i) writes only to slot i. The first
/// exception (by worker order) is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace vir
