#include "rwre/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rwre {

TransitionKernel::TransitionKernel(int d, Eigen::VectorXd probs) : d_(d), probs_(std::move(probs)) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("kernel dimension must be in [1,3]");
  if (probs_.size() != 2 * d) {
    throw std::invalid_argument("kernel needs 2d = " + std::to_string(2 * d) + " probabilities");
  }
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_(i) > 0.0 && probs_(i) < 1.0)) {
      throw std::invalid_argument("kernel probability outside (0,1): " + std::to_string(probs_(i)));
    }
  }
  if (std::abs(probs_.sum() - 1.0) > kExactTol) {
    throw std::invalid_argument("kernel probabilities do not sum to 1");
  }
}

TransitionKernel TransitionKernel::unchecked(int d, Eigen::VectorXd probs) {
  TransitionKernel k;
  k.d_ = d;
  k.probs_ = std::move(probs);
  return k;
}

TransitionKernel TransitionKernel::simple(int d) {
  return TransitionKernel(d, Eigen::VectorXd::Constant(2 * d, 1.0 / (2 * d)));
}

bool TransitionKernel::is_elliptic(double kappa0) const {
  return probs_.minCoeff() >= kappa0 && std::abs(probs_.sum() - 1.0) <= kExactTol;
}

bool TransitionKernel::is_symmetric(double tol) const {
  for (int i = 0; i < d_; ++i) {
    if (std::abs(probs_(2 * i) - probs_(2 * i + 1)) > tol) return false;
  }
  return true;
}

}  // namespace rwre
