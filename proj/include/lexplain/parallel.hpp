#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lexplain {

// Splits [0, count) into at most `jobs` contiguous chunks and runs
// fn(chunk, begin, end) for each, one thread per chunk. Chunk boundaries
// depend only on count and jobs, so callers that merge per-chunk results in
// chunk order get schedule-independent output.
template <typename Fn>
std::size_t parallel_chunks(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(jobs ? jobs : 1, count));
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return 1;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = count * c / chunks;
      const std::size_t end = count * (c + 1) / chunks;
      workers.emplace_back([&, c, begin, end] {
        try {
          fn(c, begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return chunks;
}

}  // namespace lexplain
