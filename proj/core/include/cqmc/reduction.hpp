#pragma once

// Reproducible summation. The reduction tree depends only on the number of
// terms: ranges are halved at the midpoint down to blocks of kLeafBlock terms,
// which are summed left to right. Threads evaluate whole subtrees, so the result
// is bit-identical for any worker count.

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>

namespace cqmc {

inline constexpr std::size_t kLeafBlock = 256;

namespace detail {

template <class Term>
double pairwise_range(const Term& term, std::size_t lo, std::size_t hi, unsigned spawn_depth) {
  if (hi - lo <= kLeafBlock) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  if (spawn_depth > 0) {
    auto left = std::async(std::launch::async, [&] {
      return pairwise_range(term, lo, mid, spawn_depth - 1);
    });
    const double right = pairwise_range(term, mid, hi, spawn_depth - 1);
    return left.get() + right;
  }
  return pairwise_range(term, lo, mid, 0) + pairwise_range(term, mid, hi, 0);
}

}  // namespace detail

/// Sum of term(i) for i in [0, n). `workers` = 0 picks the hardware concurrency.
template <class Term>
double pairwise_sum(std::size_t n, const Term& term, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  unsigned depth = 0;
  // only parallelize when each worker gets a meaningful share
  while ((1u << depth) < workers && (n >> (depth + 1)) >= (1u << 14)) ++depth;
  return detail::pairwise_range(term, 0, n, depth);
}

}  // namespace cqmc
