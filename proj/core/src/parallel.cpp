#include "divflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace divflow {

int thread_cap() {
  if (const char* env = std::getenv("DIVFLOW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t t = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n));
  if (t <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + t - 1) / t;
  std::vector<std::exception_ptr> errors(t);
  {
    std::vector<std::jthread> pool;
    pool.reserve(t - 1);
    for (std::size_t c = 1; c < t; ++c) {
      const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
      if (lo < hi)
        pool.emplace_back([&body, &errors, c, lo, hi] {
          try {
            body(lo, hi);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        });
    }
    try {
      body(0, std::min(n, chunk));
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace divflow
