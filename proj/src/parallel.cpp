#include "prism/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace prism {

void parallel_for(std::size_t n, std::size_t chunk, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (chunk == 0) chunk = kEvalChunk;
  if (threads <= 1 || n <= chunk) {
    fn(0, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      fn(begin, std::min(begin + chunk, n));
    }
  };
  std::vector<std::thread> pool;
  unsigned count = std::min<std::size_t>(threads, (n + chunk - 1) / chunk);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace prism
