#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "rwre/kernel.hpp"
#include "rwre/model.hpp"

namespace rwre {

/// Diagonal conjugation of a stationary kernel p into k times a symmetric
/// kernel s:  M_phi P M_phi^{-1} = k P^s  with  phi(z) = prod_i r_i^{z_i},
/// r_i = sqrt(p(e_i)/p(-e_i)).
struct Symmetrization {
  Eigen::VectorXd ratio;  ///< r_i per axis
  double k = 1.0;         ///< 2 sum_i sqrt(p(e_i) p(-e_i))
  double one_minus_k = 0.0;  ///< sum_i (sqrt p(e_i) - sqrt p(-e_i))^2, computed without cancellation
  TransitionKernel s;

  [[nodiscard]] int dim() const { return s.dim(); }

  /// phi evaluated at the unit step with the given direction index.
  [[nodiscard]] double phi_step(int dir) const;

  /// phi(z).
  [[nodiscard]] double phi(const Site& z) const;

  /// k * s(e) = sqrt(p(e) p(-e)) per axis.
  [[nodiscard]] Eigen::VectorXd coupling() const;
};

Symmetrization symmetrize(const TransitionKernel& p);

/// Max over the listed sites of |(M_phi P M_phi^{-1} f)(z) - k (P^s f)(z)|,
/// with f given by a callable on sites.
template <typename F>
double conjugation_residual(const TransitionKernel& p, const Symmetrization& sym, F&& f,
                            const std::vector<Site>& sites) {
  double worst = 0.0;
  const int nd = 2 * p.dim();
  for (const auto& z : sites) {
    double lhs = 0.0, rhs = 0.0;
    for (int e = 0; e < nd; ++e) {
      const Site ze = step(z, e);
      lhs += p[e] * f(ze) / sym.phi(ze);
      rhs += sym.s[e] * f(ze);
    }
    lhs *= sym.phi(z);
    worst = std::max(worst, std::abs(lhs - sym.k * rhs));
  }
  return worst;
}

/// Measured versus predicted curvature of 1 - k^gamma when d0 = 0.
struct KExpansion {
  double gamma = 0.0;
  double one_minus_k = 0.0;
  double k_measured = 0.0;  ///< (1 - k^gamma) / gamma^2
  double k_formula = 0.0;   ///< (1/4) sum_i (p1(e_i) - p1(-e_i))^2 / p0(e_i)
};

/// Throws std::invalid_argument unless d0 = 0, d1 != 0 and gamma != 0.
KExpansion kgamma_expansion_check(const ModelSpec& model, double gamma);

}  // namespace rwre
