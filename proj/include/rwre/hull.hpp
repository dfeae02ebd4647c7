#pragma once

#include <vector>

#include <Eigen/Core>

namespace rwre {

/// Convex hull of planar points, counter-clockwise without repeated or
/// collinear vertices (Andrew's monotone chain). Degenerate inputs give a
/// single point or a segment.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points);

/// Euclidean distance from q to the hull polygon; 0 inside or on it.
double hull_distance(const std::vector<Eigen::Vector2d>& hull, const Eigen::Vector2d& q);

}  // namespace rwre
