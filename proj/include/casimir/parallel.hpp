#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

/// Worker threads used by parallel_for: CASIMIR_THREADS if set, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Nested calls from inside a body run serially.
/// The first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace casimir
