#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rwre/model.hpp"

namespace rwre {

/// Stream tags: replicate r of a run with master seed s uses the environment
/// seed mix64(s, mix64(r, kTagEnvironment)) and the walk stream key
/// mix64(s, mix64(r, kTagWalk)).
inline constexpr std::uint64_t kTagEnvironment = 0x656e7669726f6eULL;
inline constexpr std::uint64_t kTagWalk = 0x77616c6bULL;

std::uint64_t environment_seed(std::uint64_t master_seed, std::uint64_t replicate);
std::uint64_t walk_seed(std::uint64_t master_seed, std::uint64_t replicate);

struct SimParams {
  long n_steps = 100000;
  std::size_t n_replicates = 400;
  std::uint64_t master_seed = 0;
};

struct SimEstimate {
  double gamma = 0.0;
  Eigen::VectorXd v_hat;
  Eigen::VectorXd stderr_v;  ///< replicate standard error per component
  long n_steps = 0;
  std::size_t n_replicates = 0;
  std::uint64_t master_seed = 0;
};

/// X_n of every replicate under the annealed law, in replicate order.
/// Throws std::invalid_argument for n_steps outside [1, 2^20) or no
/// replicates.
std::vector<Site> simulate_endpoints(const ModelSpec& model, double gamma, const SimParams& sim);

/// Mean of X_n / n over replicates with its standard error (needs two or
/// more replicates).
SimEstimate annealed_speed(const ModelSpec& model, double gamma, const SimParams& sim);

enum class ScalingReference { monte_carlo, exact_1d };

std::string to_string(ScalingReference r);

struct ScalingPoint {
  double gamma = 0.0;
  double v_reference = 0.0;  ///< projected on the drift direction
  double v_expansion = 0.0;
  double error = 0.0;
  double stderr_v = 0.0;
  bool above_floor = false;  ///< error > 5 stderr; used in the fit
};

struct ScalingReport {
  int order = 0;
  ScalingReference reference = ScalingReference::monte_carlo;
  Eigen::VectorXd direction;
  std::vector<ScalingPoint> points;
  double slope = 0.0;        ///< NaN when fewer than two points are above the floor
  bool noise_floor = false;  ///< fewer than two points above the floor
};

/// Uncertainty attached to the exact d = 1 reference: a few ulps of the
/// speed.
inline constexpr double kExactReferenceStderr = 1e-14;

/// Slope of log |v_ref - v_order| against log gamma along the unit mean
/// drift direction (d0, or d1 when d0 = 0). The reference is the simulated
/// speed or, in d = 1, the exact annealed speed.
ScalingReport order_scaling(const ModelSpec& model, const std::vector<double>& gammas, int order,
                            const SimParams& sim, ScalingReference reference);

}  // namespace rwre
