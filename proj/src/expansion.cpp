#include "rwre/expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "rwre/torus.hpp"

namespace rwre {

namespace {

nlohmann::json to_array(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json jtable_json(const JTable& J) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& e : directions(J.dim)) values[e.key()] = J(e);
  return {{"gamma", J.gamma},
          {"method", to_string(J.method)},
          {"grid_n", J.grid_n},
          {"est_error", J.est_error},
          {"values", values}};
}

JTable j_at_gamma(const ModelSpec& model, double gamma, const JOptions& jopt) {
  if (model.dim() == 1) {
    if (gamma == 0.0 && model.d0_zero()) throw std::invalid_argument("d = 1 with d0 = 0: J is undefined at gamma = 0");
    return j_closed_form_1d(model.p_gamma(gamma), gamma);
  }
  if (gamma == 0.0 && model.d0_zero()) return j_limit(model, jopt);
  return j_exact(model.p_gamma(gamma), jopt, gamma);
}

}  // namespace

Eigen::VectorXd p2(const Eigen::MatrixXd& C, const JTable& J) {
  if (C.rows() != J.values.size() || C.cols() != J.values.size()) throw std::invalid_argument("p2: shape mismatch");
  return C * J.values;
}

Eigen::VectorXd p3(const ThirdMoments& T, const JTable& J) {
  const int n = T.size();
  if (n != J.values.size()) throw std::invalid_argument("p3: shape mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) out(a) += T(a, b, c) * J.values(b) * J.values(c);
    }
  }
  return out;
}

ExpansionReport speed_expansion(const ModelSpec& model, double gamma, int order, const JOptions& jopt) {
  if (order < 0 || order > 3) throw std::invalid_argument("order must be 0, 1, 2 or 3");
  if (!model.hypothesis_h()) throw std::invalid_argument("hypothesis (H) violated: d0 = d1 = 0");
  const bool drifted = !model.d0_zero();
  if (order == 3 && !drifted) throw std::invalid_argument("the third-order term needs d0 != 0");
  model.check_gamma(gamma);
  const int d = model.dim();

  ExpansionReport r;
  r.gamma = gamma;
  r.order = order;
  r.d0 = model.d0();
  r.d1 = model.d1();
  const Eigen::MatrixXd C = covariance(model.nu());
  r.j_gamma = j_at_gamma(model, gamma, jopt);
  r.d2_gamma = directional_sum(p2(C, r.j_gamma), d);
  if (d >= 2) {
    r.j_limit = j_limit(model, jopt);
  } else if (drifted) {
    r.j_limit = j_closed_form_1d(model.p0(), 0.0);
  }
  if (r.j_limit) r.d2 = directional_sum(p2(C, *r.j_limit), d);
  if (drifted) r.d3 = directional_sum(p3(third_moments(model.nu()), *r.j_limit), d);

  r.v_order[0] = r.d0;
  if (order >= 1) r.v_order[1] = r.d0 + gamma * r.d1;
  if (order >= 2) r.v_order[2] = *r.v_order[1] + gamma * gamma * r.d2_gamma;
  if (order >= 3) r.v_order[3] = *r.v_order[2] + gamma * gamma * gamma * *r.d3;
  return r;
}

nlohmann::json ExpansionReport::to_json() const {
  nlohmann::json j = {{"gamma", gamma},
                      {"order", order},
                      {"d0", to_array(d0)},
                      {"d1", to_array(d1)},
                      {"d2_gamma", to_array(d2_gamma)},
                      {"j_gamma", jtable_json(j_gamma)}};
  j["d2"] = d2 ? to_array(*d2) : nlohmann::json(nullptr);
  j["d3"] = d3 ? to_array(*d3) : nlohmann::json(nullptr);
  j["j_limit"] = j_limit ? jtable_json(*j_limit) : nlohmann::json(nullptr);
  nlohmann::json v = nlohmann::json::object();
  for (int k = 0; k <= order; ++k) v[std::to_string(k)] = to_array(*v_order[static_cast<std::size_t>(k)]);
  j["v_order"] = v;
  return j;
}

double solomon_speed(const ModelSpec& model, double gamma) {
  if (model.dim() != 1) throw std::invalid_argument("solomon_speed needs d = 1");
  model.check_gamma(gamma);
  double e_rho = 0.0, e_inv = 0.0;
  for (std::size_t a = 0; a < model.nu().size(); ++a) {
    const TransitionKernel w = model.site_kernel(gamma, a);
    const double weight = model.nu().atoms()[a].weight;
    e_rho += weight * w[1] / w[0];
    e_inv += weight * w[0] / w[1];
  }
  if (e_rho < 1.0) return (1.0 - e_rho) / (1.0 + e_rho);
  if (e_inv < 1.0) return -(1.0 - e_inv) / (1.0 + e_inv);
  throw std::domain_error("environment is not ballistic in d = 1");
}

SpeedupIntegral speedup_integral(double a, int n, double tol) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("speedup_integral needs 0 < a < 1");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("speedup_integral needs an even grid");
  auto integrand = [a](const TorusPoint& pt) {
    const double c1 = pt.cos_u[0], c2 = pt.cos_u[1];
    return 2.0 * (c1 - c2) / ((1.0 - c2) + (1.0 - c1) + a * (c2 - c1));
  };
  auto at = [&](int m) {
    TorusOptions opt;
    opt.n_per_axis = m;
    opt.even_fold = true;
    return torus_mean(2, integrand, opt);
  };
  const double coarse = at(n);
  SpeedupIntegral out;
  out.value = at(2 * n);
  out.doubling_diff = std::abs(out.value - coarse);
  out.grid_n = 2 * n;
  if (out.doubling_diff > tol) throw std::runtime_error("speedup integral unstable under grid doubling");
  return out;
}

}  // namespace rwre
