#pragma once

#include <cstddef>
#include <functional>

namespace nlrothe {

/// Worker cap: NONLOCAL_ROTHE_THREADS when set (floor 1), otherwise the
/// hardware concurrency.
std::size_t thread_cap();

/// Run fn over [0, n) split into contiguous chunks, one thread per chunk.
/// Chunk boundaries depend only on n and the cap, and every chunk writes
/// disjoint output rows, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace nlrothe
