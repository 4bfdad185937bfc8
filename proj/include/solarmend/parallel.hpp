#ifndef SOLARMEND_PARALLEL_HPP
#define SOLARMEND_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace solarmend {

/// Worker count: hardware concurrency, capped by SOLARMEND_THREADS.
inline std::size_t thread_cap() {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SOLARMEND_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<std::size_t>(v);
  }
  return cap;
}

/// Runs fn(i) for i in [0, count) on up to thread_cap() threads. Work is
/// assigned round-robin, so results written by index are deterministic.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min(thread_cap(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace solarmend

#endif  // SOLARMEND_PARALLEL_HPP
