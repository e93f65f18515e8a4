#include "cantordyn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cantordyn {

std::size_t scan_threads() {
  if (const char* env = std::getenv("CANTORDYN_THREADS")) {
    try {
      long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t parallel_first_failure(std::size_t count, const std::function<bool(std::size_t)>& pred) {
  const std::size_t workers = std::min(scan_threads(), count / 256 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!pred(i)) return i;
    }
    return count;
  }
  std::atomic<std::size_t> first{count};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count && i < first.load(); i += workers) {
        if (!pred(i)) {
          std::size_t seen = first.load();
          while (i < seen && !first.compare_exchange_weak(seen, i)) {
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return first.load();
}

}  // namespace cantordyn
