#pragma once

#include <string>
#include <vector>

#include "rwre/model.hpp"

namespace rwre {

/// Named models used by the tests and the command line:
///   d1-twopoint  d=1, p0(e1)=0.6, atoms (+1,-1) and (-1/2,+1/2), equal weights
///   skewed-1d    d=1, p0(e1)=0.65, p1=0, skewed law with E[xibar(e1)^3] = -1/4
///   speedup-s2   d=2 speedup kernel with a=1/2, eps=1/50 and atoms +-U/2
///   sym-2d       d=2, p0 simple, d0=0 and d1=(1, 1/2)
///   drifted-2d   d=2, p0 drifted in both axes, asymmetric two-atom law
/// Throws std::invalid_argument for an unknown name.
ModelSpec fixture(const std::string& name);

std::vector<std::string> fixture_names();

/// p0 of the speedup construction: p0(+-e1) = (1+a)/4,
/// p0(+-e2) = (1-a)(1 +- eps)/4.
TransitionKernel speedup_kernel(double a, double eps);

/// U(+-e1) = 1, U(e2) = 0, U(-e2) = -2.
Eigen::VectorXd speedup_vector();

}  // namespace rwre
