#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rwre/domain.hpp"
#include "rwre/green.hpp"
#include "rwre/model.hpp"

namespace rwre {

enum class AuxMethod { exact_enumeration, monte_carlo };

std::string to_string(AuxMethod m);

/// Largest number of environment assignments enumerated exactly.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 20;

struct AuxOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  /// Environments sampled when enumeration exceeds the budget; 0 makes that
  /// case an error instead.
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
};

/// Kalikow's auxiliary kernel w^(z,e) = E[G(z0,z) w(z,e)] / E[G(z0,z)] on a
/// bounded domain, together with E[G(z0,.)] on U and dU.
struct AuxiliaryKernel {
  std::shared_ptr<const Domain> domain;
  double delta = 1.0;
  Site z0{};
  SiteKernels kernels;            ///< one row per interior site
  Eigen::MatrixXd kernel_stderr;  ///< interior site x direction; zero when exact
  Eigen::VectorXd mean_green;     ///< E[G(z0,z)] in global domain order
  AuxMethod method = AuxMethod::exact_enumeration;
  std::uint64_t environments = 0;
  bool weights_checked = false;   ///< rows sum to 1 and lie in [kappa0, 1-kappa0]
};

/// Exact enumeration when |atoms|^|U| <= budget, otherwise Monte Carlo over
/// opt.mc_samples environments (std::invalid_argument if that is 0).
AuxiliaryKernel auxiliary_kernel(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain,
                                 double delta, const Site& z0, const AuxOptions& opt = {});

/// max over z in U and dU of |E[G^w(z0,z)] - G^{w^}(z0,z)|, exact enumeration only.
double verify_prop1(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain, double delta,
                    const Site& z0);

struct Lemma1Result {
  std::size_t checked = 0;
  int violations_first = 0;
  int violations_second = 0;
  double worst_first = 0.0;   ///< max of lhs / rhs for the first bound
  double worst_second = 0.0;  ///< same for the second-order bound
};

/// Checks both single-site perturbation bounds for w and w' = w + dw at the
/// interior site with index z, for every y in U and y' in U and dU. Rounding
/// is absorbed by an absolute slack of 1e-12 times max(1, G').
Lemma1Result lemma1_check(const Domain& domain, double delta, const SiteKernels& omega, std::size_t z,
                          const Eigen::VectorXd& d_omega, double kappa0);

Lemma1Result& operator+=(Lemma1Result& a, const Lemma1Result& b);

struct Lemma2Point {
  double gamma = 0.0;
  double residual = 0.0;  ///< max_{y,e} |w^(y,e) - p0 - gamma p1 - gamma^2 sum_e' C J~|
  double bound = 0.0;     ///< 2 (2d)^2 / kappa0^4 gamma^3
};

struct Lemma2Report {
  std::vector<Lemma2Point> points;
  double exponent = 0.0;     ///< log-log slope of residual against gamma
  bool noise_floor = false;  ///< some residual below 1e-13; exponent not fitted
  bool bound_ok = true;
  Lemma1Result lemma1;       ///< over every (w^gamma, w^{gamma,y}) pair visited
};

/// Expansion of the auxiliary kernel in gamma. Each gamma costs one exact
/// enumeration of the kernel plus |U| enumerations with the site y frozen
/// at p^gamma.
Lemma2Report lemma2_scaling(const ModelSpec& model, std::shared_ptr<const Domain> domain, double delta,
                            const Site& z0, const std::vector<double>& gammas);

struct DriftFieldOptions {
  int window_radius = 2;
  double delta = 0.9;
  std::size_t mc_samples = 64;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

/// Drift of w^_{delta,0} on the window [-r, r]^d, the lattice replaced by a
/// box padded by ceil(3/(1-delta)) along the mean drift and ceil(1/(1-delta))
/// elsewhere, shrunk to the solver limit. Slack is the largest change of a
/// window drift when the padding is halved (same environments).
struct DriftField {
  std::vector<Site> sites;
  std::vector<Eigen::VectorXd> drift;
  std::vector<Eigen::VectorXd> drift_stderr;
  AuxMethod method = AuxMethod::exact_enumeration;
  double delta = 0.0;
  double slack = 0.0;
  int pad_forward = 0;
  int pad_back = 0;
  std::vector<Eigen::Vector2d> hull;  ///< d = 2 only
};

/// Throws std::invalid_argument unless 0 < delta < 1.
DriftField drift_field(const ModelSpec& model, double gamma, const DriftFieldOptions& opt);

}  // namespace rwre
