#include "rwre/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rwre {

ModelSpec::ModelSpec(TransitionKernel p0, PerturbationLaw nu, double kappa0, double gamma_max)
    : p0_(std::move(p0)), nu_(std::move(nu)), kappa0_(kappa0), gamma_max_(gamma_max) {
  if (p0_.dim() != nu_.dim()) throw std::invalid_argument("p0 and nu have different dimensions");
  if (!(kappa0_ > 0.0 && kappa0_ < 0.5)) throw std::invalid_argument("kappa0 must lie in (0, 1/2)");
  if (!(gamma_max_ >= 0.0)) throw std::invalid_argument("gamma_max must be non-negative");
  // Affine in gamma, so checking both ends of the range is enough.
  for (std::size_t a = 0; a < nu_.size(); ++a) {
    for (double g : {-gamma_max_, gamma_max_}) {
      const Eigen::VectorXd row = p0_.probs() + g * nu_.atoms()[a].U;
      if (row.minCoeff() < kappa0_ - kExactTol || row.maxCoeff() > 1.0 - kappa0_ + kExactTol) {
        throw std::invalid_argument("atom " + std::to_string(a) + " leaves [kappa0, 1-kappa0] at gamma=" +
                                    std::to_string(g));
      }
    }
  }
}

void ModelSpec::check_gamma(double gamma) const {
  if (!(std::abs(gamma) <= gamma_max_)) {
    throw std::out_of_range("gamma=" + std::to_string(gamma) + " outside admissible range |gamma| <= " +
                            std::to_string(gamma_max_));
  }
}

TransitionKernel ModelSpec::p_gamma(double gamma) const {
  check_gamma(gamma);
  return TransitionKernel(dim(), p0_.probs() + gamma * p1());
}

TransitionKernel ModelSpec::site_kernel(double gamma, std::size_t atom) const {
  check_gamma(gamma);
  return TransitionKernel(dim(), p0_.probs() + gamma * nu_.atoms().at(atom).U);
}

bool ModelSpec::hypothesis_h(double tol) const {
  return d0().cwiseAbs().maxCoeff() > tol || d1().cwiseAbs().maxCoeff() > tol;
}

}  // namespace rwre
