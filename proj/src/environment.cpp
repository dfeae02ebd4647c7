#include "rwre/environment.hpp"

namespace rwre {

SiteEnvironment sample_site(const ModelSpec& model, double gamma, std::uint64_t seed, const Site& z) {
  model.check_gamma(gamma);
  const std::size_t atom = sample_atom(model.nu(), seed, z);
  return {z, model.site_kernel(gamma, atom), atom};
}

EnvironmentView EnvironmentView::sampled(const ModelSpec& model, double gamma, std::uint64_t seed) {
  model.check_gamma(gamma);
  EnvironmentView v;
  v.d_ = model.dim();
  v.model_ = model;
  v.gamma_ = gamma;
  v.seed_ = seed;
  return v;
}

EnvironmentView EnvironmentView::homogeneous(TransitionKernel kernel) {
  EnvironmentView v;
  v.d_ = kernel.dim();
  v.homogeneous_ = std::move(kernel);
  return v;
}

TransitionKernel EnvironmentView::kernel(const Site& z) const {
  if (auto it = overrides_.find(z); it != overrides_.end()) return it->second;
  if (model_) return sample_site(*model_, gamma_, seed_, z).kernel;
  return homogeneous_;
}

EnvironmentView EnvironmentView::with_override(const Site& y, TransitionKernel k) const {
  EnvironmentView v = *this;
  v.overrides_[y] = std::move(k);
  return v;
}

EnvironmentView one_point_modification(const ModelSpec& model, double gamma, const EnvironmentView& env,
                                       const Site& y) {
  return env.with_override(y, model.p_gamma(gamma));
}

EnvironmentView mean_with_sampled_origin(const ModelSpec& model, double gamma, std::size_t atom) {
  return EnvironmentView::homogeneous(model.p_gamma(gamma)).with_override(origin(), model.site_kernel(gamma, atom));
}

}  // namespace rwre
