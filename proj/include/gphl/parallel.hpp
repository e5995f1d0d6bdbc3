#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace gphl {

// Deterministic static partition: iteration i always lands in slot i no matter
// how many workers run, so results are bitwise independent of worker count.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t w = static_cast<std::size_t>(workers);
  if (w > n) w = n;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += w) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gphl
