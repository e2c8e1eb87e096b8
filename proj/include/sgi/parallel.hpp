#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sgi {

// Splits [0, count) into contiguous chunks, one per hardware thread. Callers
// must make the result independent of the chunking (write to preassigned
// slots, reduce afterwards in index order).
inline void parallel_chunks(std::size_t count,
                            const std::function<void(std::size_t, std::size_t)>& body) {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t nthreads = std::min(hw, count);
  if (nthreads <= 1) {
    body(0, count);
    return;
  }
  const std::size_t chunk = (count + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&errors, &body, t, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sgi
