#pragma once

#include <cstddef>
#include <functional>

namespace ofdmim {

/// Runs body(i) for i in [0, count) across `workers` threads. Work is pulled
/// from a shared counter, so the schedule is dynamic but the index set each
/// call sees is fixed; results must be written to per-index slots for
/// deterministic aggregation. workers <= 1 runs inline. The first exception
/// thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Hardware concurrency, at least 1.
int default_worker_count();

}  // namespace ofdmim
