#pragma once

#include <cstdint>
#include <functional>

namespace fracident {

/// Number of worker threads. Capped by the FRACIDENT_THREADS environment
/// variable; defaults to the hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [begin, end) across the worker threads, blocking until
/// all chunks finish. Falls back to a serial loop for small ranges.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

} // namespace fracident
