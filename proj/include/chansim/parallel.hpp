// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_PARALLEL_HPP
#define CHANSIM_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace chansim {

// Resolve the effective worker count.  `requested` <= 0 means "auto"
// (hardware concurrency).  The CHANSIM_THREADS environment variable, when
// set to a positive integer, caps the result.  Always >= 1.
inline unsigned worker_count(int requested = 0) {
  unsigned n = requested > 0 ? unsigned(requested)
                             : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CHANSIM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, unsigned(cap));
  }
  return std::max(1u, n);
}

// Run body(begin, end) over contiguous blocks of [0, n) on `workers`
// threads.  With one worker the body runs inline on the calling thread.
// The first exception thrown by any block is rethrown to the caller.
//
// Correctness contract for callers: blocks must touch disjoint state, and
// any randomness must come from per-index substreams so that the result is
// independent of the partition (and therefore of the worker count).
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  if (n == 0) return;
  workers = std::max<unsigned>(1, std::min<std::size_t>(workers, n));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, std::size_t(w) * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace chansim

#endif  // CHANSIM_PARALLEL_HPP
