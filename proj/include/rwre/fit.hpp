#pragma once

#include <span>

namespace rwre {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares line through (log x, log y). Throws std::invalid_argument
/// with fewer than two points or any non-positive coordinate.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace rwre
