#include "rwre/fixtures.hpp"

#include <stdexcept>

namespace rwre {

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TransitionKernel speedup_kernel(double a, double eps) {
  return TransitionKernel(2, vec({(1 + a) / 4, (1 + a) / 4, (1 - a) * (1 + eps) / 4, (1 - a) * (1 - eps) / 4}));
}

Eigen::VectorXd speedup_vector() { return vec({1.0, 1.0, 0.0, -2.0}); }

ModelSpec fixture(const std::string& name) {
  if (name == "d1-twopoint") {
    PerturbationLaw nu(1, {{0.5, vec({1.0, -1.0})}, {0.5, vec({-0.5, 0.5})}});
    return ModelSpec(TransitionKernel(1, vec({0.6, 0.4})), nu, 0.15, 0.2);
  }
  if (name == "skewed-1d") {
    PerturbationLaw nu(1, {{2.0 / 3.0, vec({0.5, -0.5})}, {1.0 / 3.0, vec({-1.0, 1.0})}});
    return ModelSpec(TransitionKernel(1, vec({0.65, 0.35})), nu, 0.2, 0.1);
  }
  if (name == "speedup-s2") {
    return ModelSpec(speedup_kernel(0.5, 0.02), PerturbationLaw::symmetric_pair(2, 0.5 * speedup_vector()), 0.02,
                     0.1);
  }
  if (name == "sym-2d") {
    PerturbationLaw nu(2, {{0.5, vec({1.0, -1.0, 0.0, 0.0})}, {0.5, vec({0.0, 0.0, 0.5, -0.5})}});
    return ModelSpec(TransitionKernel::simple(2), nu, 0.1, 0.1);
  }
  if (name == "drifted-2d") {
    PerturbationLaw nu(2, {{0.6, vec({0.5, -0.25, -0.5, 0.25})}, {0.4, vec({-0.5, 0.5, 0.25, -0.25})}});
    return ModelSpec(TransitionKernel(2, vec({0.35, 0.15, 0.3, 0.2})), nu, 0.05, 0.2);
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::vector<std::string> fixture_names() {
  return {"d1-twopoint", "speedup-s2", "sym-2d", "drifted-2d", "skewed-1d"};
}

}  // namespace rwre
