#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rwre {

/// Worker cap used by every internally parallel routine. Results never
/// depend on it: work is split into index-addressed tasks whose outputs are
/// reduced in index order.
void set_num_threads(int n);
int num_threads();

/// Runs fn(i) for i in [0, n) on up to num_threads() workers. Exceptions
/// thrown by fn are rethrown on the calling thread (the first by index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Pairwise (tree) sum in a fixed order.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() == 1) return xs[0];
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

}  // namespace rwre
