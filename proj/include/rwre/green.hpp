#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "rwre/domain.hpp"
#include "rwre/environment.hpp"
#include "rwre/kernel.hpp"

namespace rwre {

/// One kernel per interior site of a domain, in domain order.
using SiteKernels = std::vector<TransitionKernel>;

SiteKernels kernels_on(const Domain& domain, const EnvironmentView& env);

/// G_{U,delta}(z0, .) on U and dU: expected delta-discounted occupation of
/// each interior site, and the discounted exit distribution on dU.
struct GreenTable {
  std::shared_ptr<const Domain> domain;
  Site z0{};
  std::size_t z0_index = 0;
  double delta = 1.0;
  Eigen::VectorXd values;  // global domain index order

  /// G(z0, z); zero for z outside U and dU.
  [[nodiscard]] double operator()(const Site& z) const;

  /// Max over z in U and dU of |G(z0,z) - 1{z0=z} - sum_e G(z0,z-e) delta w(z-e,e)|.
  [[nodiscard]] double balance_residual(const SiteKernels& kernels) const;
};

/// Solves (I - delta P_U)^T g = 1_{z0} and extends g to dU by one step.
/// Throws std::invalid_argument if z0 is not in U, delta is outside [0,1],
/// or the domain exceeds kMaxDomainSites.
GreenTable green_finite(std::shared_ptr<const Domain> domain, double delta, const SiteKernels& kernels,
                        const Site& z0);

GreenTable green_finite(std::shared_ptr<const Domain> domain, double delta, const EnvironmentView& env,
                        const Site& z0);

/// G(x, y) for every interior x (domain order) and a fixed interior target
/// y: solves (I - delta P_U) g = 1_y.
Eigen::VectorXd green_column(const Domain& domain, double delta, const SiteKernels& kernels, const Site& y);

/// Dense matrix G(y, y') with rows y in U and columns y' in U and dU (global
/// index order). Intended for small domains.
Eigen::MatrixXd green_matrix(const Domain& domain, double delta, const SiteKernels& kernels);

/// G(x, y') for any x in U or dU: the matrix entry for interior x, and the
/// indicator 1{x = y'} for boundary x (the walk is stopped on arrival).
inline double green_entry(const Domain& domain, const Eigen::MatrixXd& G, std::size_t x, std::size_t y) {
  if (x < domain.interior_size()) return G(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  return x == y ? 1.0 : 0.0;
}

}  // namespace rwre
