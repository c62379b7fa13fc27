#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace addforms {

inline constexpr std::uint64_t kDefaultWorkBudget = 1'000'000'000;

struct ExecutionOptions {
  unsigned threads = 1;
  /// Upper bound on predicted primitive evaluations for exact enumeration.
  std::uint64_t work_budget = kDefaultWorkBudget;
};

/// Splits [0, n) into at most `threads` contiguous blocks, runs `fn(begin, end)`
/// on each (concurrently when threads > 1) and returns the results in block
/// order, so merges are independent of scheduling.
template <class Fn>
auto map_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}, std::size_t{0}));
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, n));
  std::vector<Result> results(blocks);
  auto bounds = [&](std::size_t b) { return std::pair{n * b / blocks, n * (b + 1) / blocks}; };
  if (blocks == 1) {
    results[0] = fn(std::size_t{0}, n);
    return results;
  }
  std::vector<std::jthread> workers;
  workers.reserve(blocks - 1);
  for (std::size_t b = 1; b < blocks; ++b) {
    workers.emplace_back([&, b] {
      auto [lo, hi] = bounds(b);
      results[b] = fn(lo, hi);
    });
  }
  auto [lo, hi] = bounds(0);
  results[0] = fn(lo, hi);
  workers.clear();
  return results;
}

}  // namespace addforms
