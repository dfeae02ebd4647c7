#include "rwre/symmetrize.hpp"

#include <cmath>
#include <stdexcept>

namespace rwre {

double Symmetrization::phi_step(int dir) const {
  const double r = ratio(dir / 2);
  return dir % 2 == 0 ? r : 1.0 / r;
}

double Symmetrization::phi(const Site& z) const {
  double out = 1.0;
  for (int i = 0; i < dim(); ++i) out *= std::pow(ratio(i), z[i]);
  return out;
}

Eigen::VectorXd Symmetrization::coupling() const {
  Eigen::VectorXd c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = k * s[2 * i];
  return c;
}

Symmetrization symmetrize(const TransitionKernel& p) {
  const int d = p.dim();
  Symmetrization out;
  out.ratio.resize(d);
  Eigen::VectorXd geo(d);
  double gap = 0.0;
  for (int i = 0; i < d; ++i) {
    const double plus = p[2 * i], minus = p[2 * i + 1];
    out.ratio(i) = std::sqrt(plus / minus);
    geo(i) = std::sqrt(plus * minus);
    const double diff = std::sqrt(plus) - std::sqrt(minus);
    gap += diff * diff;
  }
  out.k = 2.0 * geo.sum();
  out.one_minus_k = gap;
  Eigen::VectorXd s(2 * d);
  for (int i = 0; i < d; ++i) s(2 * i) = s(2 * i + 1) = geo(i) / out.k;
  out.s = TransitionKernel(d, s);
  return out;
}

KExpansion kgamma_expansion_check(const ModelSpec& model, double gamma) {
  if (!model.d0_zero()) throw std::invalid_argument("K expansion requires d0 = 0");
  if (!model.hypothesis_h()) throw std::invalid_argument("K expansion requires d1 != 0");
  if (gamma == 0.0) throw std::invalid_argument("K expansion requires gamma != 0");
  const int d = model.dim();
  KExpansion out;
  out.gamma = gamma;
  out.one_minus_k = symmetrize(model.p_gamma(gamma)).one_minus_k;
  out.k_measured = out.one_minus_k / (gamma * gamma);
  const Eigen::VectorXd& p1 = model.p1();
  for (int i = 0; i < d; ++i) {
    const double diff = p1(2 * i) - p1(2 * i + 1);
    out.k_formula += 0.25 * diff * diff / model.p0()[2 * i];
  }
  return out;
}

}  // namespace rwre
