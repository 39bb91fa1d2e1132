#include "levykit/common.hpp"

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include "levykit/parallel.hpp"

namespace levykit {

namespace {
std::atomic<int> g_max_threads{0};  // 0: use hardware_concurrency
}

int max_threads() {
  const int n = g_max_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

void parallel_chunks(std::size_t n_chunks,
                     const std::function<void(std::size_t)>& body) {
  if (n_chunks == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        body(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace levykit
