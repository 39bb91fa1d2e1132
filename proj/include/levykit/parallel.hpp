#pragma once

#include <cstddef>
#include <functional>

namespace levykit {

/// Runs body(c) for c in [0, n_chunks). Chunk boundaries are fixed by the
/// caller, so results are identical for any worker count as long as chunks
/// write to disjoint output slots.
void parallel_chunks(std::size_t n_chunks,
                     const std::function<void(std::size_t)>& body);

}  // namespace levykit
