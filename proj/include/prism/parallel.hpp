#pragma once

#include <cstddef>
#include <functional>

namespace prism {

// Default cell-chunk size for data-parallel evaluation.
inline constexpr std::size_t kEvalChunk = 65536;

// Runs fn(begin, end) over [0, n) split into chunks, on up to `threads`
// workers. threads <= 1 runs inline.
void parallel_for(std::size_t n, std::size_t chunk, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace prism
