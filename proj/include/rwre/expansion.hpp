#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "rwre/jtable.hpp"
#include "rwre/model.hpp"
#include "rwre/perturbation.hpp"

namespace rwre {

/// p2(e) = sum_e' C(e,e') J(e').
Eigen::VectorXd p2(const Eigen::MatrixXd& C, const JTable& J);

/// p3(e) = sum_{e',e''} T(e,e',e'') J(e') J(e'').
Eigen::VectorXd p3(const ThirdMoments& T, const JTable& J);

struct ExpansionReport {
  double gamma = 0.0;
  int order = 0;
  Eigen::VectorXd d0, d1;
  Eigen::VectorXd d2_gamma;        ///< from J^gamma
  std::optional<Eigen::VectorXd> d2;  ///< from the gamma-free J (d >= 2)
  std::optional<Eigen::VectorXd> d3;  ///< needs d0 != 0
  std::array<std::optional<Eigen::VectorXd>, 4> v_order;  ///< filled up to `order`
  JTable j_gamma;
  std::optional<JTable> j_limit;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// v^gamma to the requested order (0..3). The gamma-dependent J comes from
/// the closed form in d = 1 and from j_exact in d >= 2. Throws
/// std::invalid_argument when (H) fails, when order 3 is requested with
/// d0 = 0, or when order is outside 0..3.
ExpansionReport speed_expansion(const ModelSpec& model, double gamma, int order, const JOptions& jopt = {});

/// Exact annealed speed in d = 1: (1 - E rho)/(1 + E rho), rho = w(-e1)/w(e1),
/// or the mirrored expression for walks transient to the left. Throws
/// std::domain_error in the non-ballistic regime.
double solomon_speed(const ModelSpec& model, double gamma);

struct SpeedupIntegral {
  double value = 0.0;
  double doubling_diff = 0.0;
  int grid_n = 0;  ///< nodes per axis of the reported value
};

/// (2pi)^-2 int 2(cos u1 - cos u2) / ((1 - cos u2) + (1 - cos u1) + a(cos u2 - cos u1)) du,
/// evaluated at n and 2n nodes per axis; the 2n value is reported. Throws
/// std::invalid_argument unless 0 < a < 1 and std::runtime_error when the
/// doubling difference exceeds tol.
SpeedupIntegral speedup_integral(double a, int n = 2048, double tol = 1e-6);

}  // namespace rwre
