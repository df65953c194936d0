#pragma once

#include <cstddef>
#include <functional>

namespace capcover {

// CAPCOVER_THREADS if set and positive, otherwise the hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Each index writes only its own output, so results do not
// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace capcover
