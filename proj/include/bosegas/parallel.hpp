#pragma once

#include <cstdint>
#include <functional>

namespace bosegas {

// Global worker-count cap shared by assembly, matvec and grid sweeps.
// Results are independent of the thread count: work items write to
// disjoint slots and reductions are accumulated in index order.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n). Falls back to a serial loop for small n.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

// Chunked variant: fn(begin, end) over disjoint ranges.
void parallel_for_chunks(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& fn);

// Coarse-grained map for expensive independent items (grid cells, matrix
// columns): spreads work across threads even for small n.
void parallel_for_items(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace bosegas
