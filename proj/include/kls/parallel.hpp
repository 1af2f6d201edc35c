#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kls {

/// Worker count used when a caller passes 0.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Evaluates fn(i) for every chunk index i in [0, num_chunks) on up to
/// `threads` workers and returns the results indexed by chunk. Worker w
/// takes chunks w, w + threads, ...; callers combine the returned vector in
/// index order, which makes the final value independent of the thread count.
template <class Result, class ChunkFn>
std::vector<Result> map_chunks(std::size_t num_chunks, unsigned threads, ChunkFn&& fn) {
  std::vector<Result> results(num_chunks);
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(num_chunks, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < num_chunks; ++i) results[i] = fn(i);
    return results;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < num_chunks; i += threads) results[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace kls
