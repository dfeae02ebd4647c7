#include "rwre/jtable.hpp"

#include <stdexcept>

#include "rwre/torus.hpp"

namespace rwre {

namespace {

using Terms = Eigen::Array<double, 2 * kMaxDim, 1>;

JTable assemble(const TransitionKernel& p, const Eigen::VectorXd& terms, bool with_phi_term) {
  const int d = p.dim();
  const Symmetrization sym = symmetrize(p);
  JTable out;
  out.dim = d;
  out.values.resize(2 * d);
  for (int i = 0; i < d; ++i) {
    const double g = terms(i), diff = terms(d + i);
    const double phi_plus = with_phi_term ? sym.phi_step(2 * i + 1) - 1.0 : 0.0;  // phi(-e_i) - 1
    const double phi_minus = with_phi_term ? sym.phi_step(2 * i) - 1.0 : 0.0;    // phi(+e_i) - 1
    out.values(2 * i) = phi_plus * g + diff;
    out.values(2 * i + 1) = phi_minus * g + diff;
  }
  return out;
}

}  // namespace

std::string to_string(JMethod m) {
  switch (m) {
    case JMethod::quadrature:
      return "quadrature";
    case JMethod::limit_quadrature:
      return "limit-quadrature";
    case JMethod::series:
      return "series";
    case JMethod::closed_form_1d:
      return "closed-form-1d";
  }
  return "unknown";
}

int default_grid(int d) { return d <= 2 ? 256 : 64; }

Eigen::VectorXd symmetric_green_terms(const Eigen::VectorXd& coupling, int n_per_axis) {
  const int d = static_cast<int>(coupling.size());
  std::array<double, kMaxDim> c{};
  for (int j = 0; j < d; ++j) c[j] = 2.0 * coupling(j);
  auto integrand = [&](const TorusPoint& pt) {
    double denom = 1.0;
    for (int j = 0; j < d; ++j) denom -= c[j] * pt.cos_u[j];
    const double inv = 1.0 / denom;
    Terms t = Terms::Zero();
    for (int i = 0; i < d; ++i) {
      t(i) = pt.cos_u[i] * inv;
      t(d + i) = (pt.cos_u[i] - 1.0) * inv;
    }
    return t;
  };
  TorusOptions opt;
  opt.n_per_axis = n_per_axis;
  opt.exclude_origin = true;
  opt.even_fold = n_per_axis % 2 == 0;
  const Terms t = torus_mean(d, integrand, opt);
  return t.head(2 * d).matrix();
}

JTable j_exact(const TransitionKernel& p_gamma, const JOptions& opt, double gamma) {
  const int d = p_gamma.dim();
  if (d < 2) throw std::invalid_argument("j_exact needs d >= 2; use j_closed_form_1d");
  const Symmetrization sym = symmetrize(p_gamma);
  if (!(sym.one_minus_k > 0.0)) throw std::domain_error("k >= 1: the mean environment has no drift");
  const int n = opt.n_per_axis > 0 ? opt.n_per_axis : default_grid(d);

  JTable out = assemble(p_gamma, symmetric_green_terms(sym.coupling(), n), true);
  out.grid_n = n;
  if (opt.doubling_check) {
    JTable fine = assemble(p_gamma, symmetric_green_terms(sym.coupling(), 2 * n), true);
    fine.est_error = (fine.values - out.values).cwiseAbs().maxCoeff();
    fine.grid_n = 2 * n;
    out = fine;
  }
  out.gamma = gamma;
  out.method = JMethod::quadrature;
  return out;
}

JTable j_limit(const ModelSpec& model, const JOptions& opt) {
  const int d = model.dim();
  if (d < 2) throw std::invalid_argument("j_limit needs d >= 2");
  if (!model.hypothesis_h()) throw std::invalid_argument("hypothesis (H) violated: d0 = d1 = 0");
  if (!model.d0_zero()) {
    JTable out = j_exact(model.p0(), opt, 0.0);
    out.method = JMethod::limit_quadrature;
    return out;
  }
  // d0 = 0: k = 1 and only the bounded (cos u_i - 1) term survives.
  const int n = opt.n_per_axis > 0 ? opt.n_per_axis : default_grid(d);
  const Eigen::VectorXd coupling = symmetrize(model.p0()).coupling();
  JTable out = assemble(model.p0(), symmetric_green_terms(coupling, n), false);
  out.grid_n = n;
  if (opt.doubling_check) {
    JTable fine = assemble(model.p0(), symmetric_green_terms(coupling, 2 * n), false);
    fine.est_error = (fine.values - out.values).cwiseAbs().maxCoeff();
    fine.grid_n = 2 * n;
    out = fine;
  }
  out.method = JMethod::limit_quadrature;
  return out;
}

JTable j_closed_form_1d(const TransitionKernel& p_gamma, double gamma) {
  if (p_gamma.dim() != 1) throw std::invalid_argument("j_closed_form_1d needs d = 1");
  const double v = p_gamma[0] - p_gamma[1];
  if (v == 0.0) throw std::invalid_argument("zero drift: J is not defined in d = 1");
  JTable out;
  out.dim = 1;
  out.gamma = gamma;
  out.method = JMethod::closed_form_1d;
  out.values = Eigen::VectorXd::Zero(2);
  // Transient towards the drift: returns from behind are certain.
  if (v > 0) {
    out.values(0) = -1.0 / p_gamma[0];
  } else {
    out.values(1) = -1.0 / p_gamma[1];
  }
  return out;
}

}  // namespace rwre
