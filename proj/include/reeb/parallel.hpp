#pragma once

#include <cstddef>
#include <functional>

namespace reeb {

/// Worker count for parallel_for. Defaults to REEB_BRANCH_THREADS, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n) on up to thread_count() threads.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace reeb
