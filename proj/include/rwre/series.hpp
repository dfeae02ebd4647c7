#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rwre/kernel.hpp"

namespace rwre {

struct SeriesOptions {
  /// Survival factor per step, in [0,1].
  double k = 1.0;
  /// Maximum number of steps; 0 selects 100000.
  long horizon = 0;
  /// Requested bound on the neglected tail.
  double tol = 1e-12;
  /// Steps per block for the empirical tail estimate at k = 1.
  int block = 64;
};

struct SeriesResult {
  std::vector<double> values;  ///< one per requested pair
  double tail_bound = 0.0;     ///< k^N/(1-k) when k < 1, else the empirical block estimate
  long steps = 0;              ///< terms summed
};

/// Independent oracle G_k(z, z') = sum_n k^n P^n(z, z') for a stationary
/// kernel, by repeated convolution of the walk law on a box that grows with
/// the step count. Stops as soon as the tail is below tol. Throws
/// std::runtime_error if the horizon is exhausted first.
SeriesResult series_oracle(const TransitionKernel& p, std::span<const std::pair<Site, Site>> pairs,
                           const SeriesOptions& opt = {});

}  // namespace rwre
