#include "rwre/one_point.hpp"

#include <memory>
#include <stdexcept>

#include "rwre/domain.hpp"
#include "rwre/green.hpp"

namespace rwre {

namespace {

struct MeanColumn {
  Domain domain;
  Eigen::VectorXd g;  // G(x, 0) for interior x
};

MeanColumn mean_column(const ModelSpec& model, double gamma, int box_radius, double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("killing factor k must lie in (0,1)");
  if (box_radius < 1) throw std::invalid_argument("box radius must be at least 1");
  model.check_gamma(gamma);
  Domain domain = Domain::cube(model.dim(), box_radius);
  const SiteKernels kernels(domain.interior_size(), model.p_gamma(gamma));
  Eigen::VectorXd g = green_column(domain, k, kernels, origin());
  return {std::move(domain), std::move(g)};
}

OnePointWeight weight_from_column(const ModelSpec& model, double gamma, std::size_t atom, const MeanColumn& col,
                                  double k) {
  const Eigen::VectorXd delta = gamma * model.nu().centered(atom);
  const std::size_t n = col.domain.interior_size();
  const auto o = static_cast<std::size_t>(col.domain.index_of(origin()));
  double a = 0.0;
  for (int e = 0; e < 2 * model.dim(); ++e) {
    const std::size_t j = col.domain.neighbour(o, e);
    if (j < n) a += delta(e) * col.g(static_cast<Eigen::Index>(j));
  }
  const double denom = 1.0 - k * a;
  if (!(denom > 0.0)) throw std::domain_error("one-point update denominator is not positive");
  OnePointWeight out;
  out.g_mean = col.g(static_cast<Eigen::Index>(o));
  out.g_modified = out.g_mean / denom;
  out.weight = k * a;
  return out;
}

}  // namespace

OnePointWeight one_point_green_ratio(const ModelSpec& model, double gamma, std::size_t atom, int box_radius,
                                     double k) {
  if (atom >= model.nu().size()) throw std::out_of_range("atom index out of range");
  return weight_from_column(model, gamma, atom, mean_column(model, gamma, box_radius, k), k);
}

Eigen::VectorXd second_order_by_weights(const ModelSpec& model, double gamma, int box_radius, double k) {
  const MeanColumn col = mean_column(model, gamma, box_radius, k);
  const int d = model.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (std::size_t a = 0; a < model.nu().size(); ++a) {
    const double w = weight_from_column(model, gamma, a, col, k).weight;
    out += model.nu().atoms()[a].weight * w * gamma * directional_sum(model.nu().centered(a), d);
  }
  return out;
}

}  // namespace rwre
