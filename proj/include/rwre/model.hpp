#pragma once

#include <string>

#include <Eigen/Core>

#include "rwre/kernel.hpp"
#include "rwre/perturbation.hpp"

namespace rwre {

/// The environment omega^gamma(z,.) = p0 + gamma * xi(z,.), with xi(z,.)
/// i.i.d. of law nu, admissible for |gamma| <= gamma_max.
class ModelSpec {
 public:
  ModelSpec() = default;

  /// Validates that p0 + gamma*U lies in [kappa0, 1-kappa0] for every atom and
  /// every |gamma| <= gamma_max; throws std::invalid_argument otherwise.
  ModelSpec(TransitionKernel p0, PerturbationLaw nu, double kappa0, double gamma_max);

  [[nodiscard]] int dim() const { return p0_.dim(); }
  [[nodiscard]] const TransitionKernel& p0() const { return p0_; }
  [[nodiscard]] const PerturbationLaw& nu() const { return nu_; }
  [[nodiscard]] double kappa0() const { return kappa0_; }
  [[nodiscard]] double gamma_max() const { return gamma_max_; }

  /// Throws std::out_of_range when |gamma| > gamma_max.
  void check_gamma(double gamma) const;

  /// Mean environment p^gamma = p0 + gamma * p1.
  [[nodiscard]] TransitionKernel p_gamma(double gamma) const;

  /// Site kernel for a given atom: p0 + gamma * U_atom.
  [[nodiscard]] TransitionKernel site_kernel(double gamma, std::size_t atom) const;

  /// p1 = E[xi(0,.)].
  [[nodiscard]] const Eigen::VectorXd& p1() const { return nu_.mean(); }

  [[nodiscard]] Eigen::VectorXd d0() const { return drift(p0_); }
  [[nodiscard]] Eigen::VectorXd d1() const { return directional_sum(p1(), dim()); }

  [[nodiscard]] bool d0_zero(double tol = kExactTol) const { return d0().cwiseAbs().maxCoeff() <= tol; }

  /// Hypothesis (H): d0 != 0 or d1 != 0.
  [[nodiscard]] bool hypothesis_h(double tol = kExactTol) const;

 private:
  TransitionKernel p0_;
  PerturbationLaw nu_;
  double kappa0_ = 0.0;
  double gamma_max_ = 0.0;
};

}  // namespace rwre
