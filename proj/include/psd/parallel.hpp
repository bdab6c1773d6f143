#pragma once

#include <cstddef>
#include <functional>

namespace psd {

// Thread count from PSD_THREADS, else hardware concurrency (at least 1).
unsigned default_threads();

// Calls body(begin, end) on contiguous blocks of [0, n). Blocks depend only on n
// and the thread count, so callers writing to per-index slots stay deterministic.
void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                     unsigned threads = 0);

template <class F>
void parallel_for(std::size_t n, F&& f, unsigned threads = 0) {
  parallel_blocks(
      n,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) f(i);
      },
      threads);
}

}  // namespace psd
