#pragma once

#include <cstddef>
#include <functional>

namespace fedgraph {

/// Runs body(begin, end) over contiguous chunks of [0, n), one chunk per
/// worker. Chunks write to disjoint outputs only, so results are identical
/// for every thread count; all cross-chunk reductions in this codebase are
/// performed serially in fixed index order by the caller.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fedgraph
