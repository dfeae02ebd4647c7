#pragma once

#include <string>

#include <Eigen/Core>

#include "rwre/kernel.hpp"
#include "rwre/model.hpp"
#include "rwre/symmetrize.hpp"

namespace rwre {

enum class JMethod { quadrature, limit_quadrature, series, closed_form_1d };

std::string to_string(JMethod m);

/// J_e = G^p(e,0) - G^p(0,0) for every step e, in direction-index order.
struct JTable {
  int dim = 0;
  double gamma = 0.0;
  Eigen::VectorXd values;
  JMethod method = JMethod::quadrature;
  int grid_n = 0;          ///< quadrature nodes per axis (0 if not a quadrature)
  double est_error = 0.0;  ///< grid-doubling difference, or 0 for closed forms

  [[nodiscard]] double operator()(const Direction& e) const { return values(e.index()); }
};

/// Default nodes per axis: 256 for d = 2, 64 for d = 3.
int default_grid(int d);

struct JOptions {
  int n_per_axis = 0;  ///< 0 selects default_grid(d)
  /// Also evaluate at 2n and report the refined values with the difference
  /// as est_error.
  bool doubling_check = true;
};

/// Values of the symmetric killed Green function on the lattice,
/// G(x,0) = (2pi)^-d int cos(x.u) / (1 - 2 sum_j c_j cos u_j) du, returned as
/// [G(e_1,0) .. G(e_d,0), G(e_1,0)-G(0,0) .. G(e_d,0)-G(0,0)], the
/// differences integrated directly with numerator cos(u_i) - 1.
Eigen::VectorXd symmetric_green_terms(const Eigen::VectorXd& coupling, int n_per_axis);

/// Exact J^gamma in d >= 2 through the symmetrised Fourier representation.
/// Throws std::domain_error when k >= 1 (zero drift).
JTable j_exact(const TransitionKernel& p_gamma, const JOptions& opt = {}, double gamma = 0.0);

/// gamma-independent leading term of J^gamma (d >= 2): the same formula at
/// p0 when d0 != 0; only the bounded (cos u_i - 1) term at p0 when d0 = 0.
/// Throws std::invalid_argument when d < 2 or (H) fails.
JTable j_limit(const ModelSpec& model, const JOptions& opt = {});

/// d = 1: J_{-e1} = 0, J_{e1} = -1/p(e1) when the drift points to +e1, and
/// mirrored otherwise. Throws std::invalid_argument for zero drift.
JTable j_closed_form_1d(const TransitionKernel& p_gamma, double gamma = 0.0);

}  // namespace rwre
