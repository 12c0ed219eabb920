#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace medlat {

/// Smallest index in [0, total) satisfying `pred`. Each worker scans one
/// contiguous chunk and stops at its first hit, so the answer does not
/// depend on the worker count.
template <class Pred>
std::optional<std::uint64_t> parallel_find_first(std::uint64_t total, std::size_t workers, Pred pred) {
  workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, total ? total : 1));
  if (workers == 1) {
    for (std::uint64_t k = 0; k < total; ++k)
      if (pred(k)) return k;
    return std::nullopt;
  }
  std::vector<std::optional<std::uint64_t>> hits(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::uint64_t lo = w * chunk, hi = std::min(total, lo + chunk);
        for (std::uint64_t k = lo; k < hi; ++k)
          if (pred(k)) {
            hits[w] = k;
            return;
          }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& h : hits)
    if (h) return h;
  return std::nullopt;
}

}  // namespace medlat
