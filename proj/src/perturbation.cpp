#include "rwre/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwre/kernel.hpp"

namespace rwre {

double ThirdMoments::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

PerturbationLaw::PerturbationLaw(int d, std::vector<PerturbationAtom> atoms)
    : d_(d), atoms_(std::move(atoms)) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("perturbation law dimension must be in [1,3]");
  if (atoms_.empty()) throw std::invalid_argument("perturbation law needs at least one atom");
  double total = 0.0;
  for (const auto& atom : atoms_) {
    if (atom.U.size() != 2 * d) throw std::invalid_argument("atom U has wrong length");
    if (!(atom.weight >= 0.0)) throw std::invalid_argument("atom weight must be non-negative");
    if (std::abs(atom.U.sum()) > kExactTol) throw std::invalid_argument("atom U must sum to 0");
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > kExactTol) throw std::invalid_argument("atom weights must sum to 1");

  mean_ = Eigen::VectorXd::Zero(2 * d);
  for (const auto& atom : atoms_) mean_ += atom.weight * atom.U;

  cdf_.resize(atoms_.size());
  double acc = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    acc += atoms_[a].weight;
    cdf_[a] = acc;
  }
  cdf_.back() = 1.0;
}

PerturbationLaw PerturbationLaw::degenerate(int d) {
  return PerturbationLaw(d, {{1.0, Eigen::VectorXd::Zero(2 * d)}});
}

PerturbationLaw PerturbationLaw::symmetric_pair(int d, const Eigen::VectorXd& U) {
  return PerturbationLaw(d, {{0.5, U}, {0.5, -U}});
}

bool PerturbationLaw::is_degenerate() const {
  for (const auto& atom : atoms_) {
    if (atom.weight > 0.0 && (atom.U - mean_).cwiseAbs().maxCoeff() > kExactTol) return false;
  }
  return true;
}

std::size_t PerturbationLaw::select(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), atoms_.size() - 1);
}

Eigen::MatrixXd covariance(const PerturbationLaw& nu) {
  const int n = 2 * nu.dim();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const Eigen::VectorXd xb = nu.centered(a);
    C.noalias() += nu.atoms()[a].weight * xb * xb.transpose();
  }
  return C;
}

ThirdMoments third_moments(const PerturbationLaw& nu) {
  const int n = 2 * nu.dim();
  ThirdMoments T(n);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const Eigen::VectorXd xb = nu.centered(a);
    const double w = nu.atoms()[a].weight;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) T(i, j, k) += w * xb(i) * xb(j) * xb(k);
  }
  return T;
}

}  // namespace rwre
