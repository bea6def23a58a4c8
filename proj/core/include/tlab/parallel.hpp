#ifndef TLAB_PARALLEL_HPP
#define TLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tlab {

/// Worker count: TLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, count). Bodies write to distinct slots indexed
/// by i, so results do not depend on scheduling. The first exception thrown
/// by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tlab

#endif  // TLAB_PARALLEL_HPP
