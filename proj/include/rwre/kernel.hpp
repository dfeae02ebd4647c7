#pragma once

#include <Eigen/Core>

#include "rwre/direction.hpp"

namespace rwre {

/// Tolerance for identities that are exact in rational arithmetic.
inline constexpr double kExactTol = 1e-12;

/// Nearest-neighbour transition probabilities of a single site, stored in
/// direction-index order (+e1, -e1, +e2, -e2, ...).
class TransitionKernel {
 public:
  TransitionKernel() = default;

  /// Throws std::invalid_argument unless probs has 2d entries, each in
  /// (0,1), summing to 1 within kExactTol.
  TransitionKernel(int d, Eigen::VectorXd probs);

  /// Builds a kernel without validation; for intermediate objects such as
  /// perturbed rows that are validated elsewhere.
  static TransitionKernel unchecked(int d, Eigen::VectorXd probs);

  /// All 2d probabilities equal to 1/(2d).
  static TransitionKernel simple(int d);

  [[nodiscard]] int dim() const { return d_; }
  [[nodiscard]] const Eigen::VectorXd& probs() const { return probs_; }
  [[nodiscard]] double operator[](int index) const { return probs_(index); }
  [[nodiscard]] double operator()(const Direction& e) const { return probs_(e.index()); }

  [[nodiscard]] double min_prob() const { return probs_.minCoeff(); }
  [[nodiscard]] bool is_elliptic(double kappa0) const;

  /// p(e_i) == p(-e_i) for every axis, within tol.
  [[nodiscard]] bool is_symmetric(double tol = kExactTol) const;

 private:
  int d_ = 0;
  Eigen::VectorXd probs_;
};

/// Sum over steps of weight(e) * e, for any vector of 2d per-direction values.
template <typename Derived>
Eigen::VectorXd directional_sum(const Eigen::MatrixBase<Derived>& per_direction, int d) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) out(i) = per_direction(2 * i) - per_direction(2 * i + 1);
  return out;
}

/// Mean displacement of one step.
inline Eigen::VectorXd drift(const TransitionKernel& kernel) {
  return directional_sum(kernel.probs(), kernel.dim());
}

}  // namespace rwre
