#pragma once

#include <cstddef>
#include <functional>

namespace tempfrac {

/// Worker count used by parallel_for. Defaults to the TEMPFRAC_THREADS
/// environment variable, else std::thread::hardware_concurrency().
int thread_count();

/// Override the worker count (n <= 0 restores the default).
void set_thread_count(int n);

/// Run body(i) for i in [0, n) using static contiguous chunks. Every index is
/// processed exactly once; results must not depend on scheduling. The first
/// exception thrown by a worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tempfrac
