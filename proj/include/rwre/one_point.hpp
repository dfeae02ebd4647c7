#pragma once

#include <Eigen/Core>

#include "rwre/model.hpp"

namespace rwre {

/// Effect of replacing the mean kernel p^gamma at the origin by the kernel of
/// one atom, for the walk killed at rate k on the cube [-R, R]^d.
struct OnePointWeight {
  double weight = 0.0;      ///< 1 - G(0,0) / G~(0,0)
  double g_mean = 0.0;      ///< G^{p^gamma}(0,0)
  double g_modified = 0.0;  ///< G^{p~^gamma}(0,0)
};

/// Rank-one update: the modified row differs from p^gamma by
/// Delta = gamma * xibar, so G~(0,0) = G(0,0) / (1 - k sum_e Delta(e) G(e,0)).
/// One sparse solve for the column G(., 0). Throws std::invalid_argument
/// unless 0 < k < 1, and std::domain_error when the update denominator is
/// not positive.
OnePointWeight one_point_green_ratio(const ModelSpec& model, double gamma, std::size_t atom, int box_radius, double k);

/// gamma^2 d_{2,gamma} written as the weighted expectation
/// E[(gamma sum_e xibar(e) e) * weight(atom)].
Eigen::VectorXd second_order_by_weights(const ModelSpec& model, double gamma, int box_radius, double k);

}  // namespace rwre
