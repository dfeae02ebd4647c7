#pragma once

#include <vector>

#include <Eigen/Core>

namespace rwre {

/// One support point of the site perturbation law: the perturbation vector U
/// (indexed like a kernel) and its probability.
struct PerturbationAtom {
  double weight = 0.0;
  Eigen::VectorXd U;
};

/// Centered third mixed moments E[xi(e) xi(e') xi(e'')] stored densely.
class ThirdMoments {
 public:
  explicit ThirdMoments(int n_dir) : n_(n_dir), data_(n_dir * n_dir * n_dir, 0.0) {}

  [[nodiscard]] int size() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  [[nodiscard]] double operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }
  [[nodiscard]] double max_abs() const;

 private:
  int n_;
  std::vector<double> data_;
};

/// Finite-support law of xi(0, .). Weights sum to 1 and every U sums to 0.
class PerturbationLaw {
 public:
  PerturbationLaw() = default;

  /// Throws std::invalid_argument on inconsistent sizes, negative weights,
  /// weights not summing to 1, or an atom with sum(U) != 0.
  PerturbationLaw(int d, std::vector<PerturbationAtom> atoms);

  /// Single atom U = 0.
  static PerturbationLaw degenerate(int d);

  /// Two equiprobable atoms +U and -U.
  static PerturbationLaw symmetric_pair(int d, const Eigen::VectorXd& U);

  [[nodiscard]] int dim() const { return d_; }
  [[nodiscard]] const std::vector<PerturbationAtom>& atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }

  /// p1(e) = E[xi(0,e)].
  [[nodiscard]] const Eigen::VectorXd& mean() const { return mean_; }

  /// xi-bar for atom a: U_a - p1.
  [[nodiscard]] Eigen::VectorXd centered(std::size_t a) const { return atoms_[a].U - mean_; }

  /// True when every atom coincides with the mean (zero covariance).
  [[nodiscard]] bool is_degenerate() const;

  /// Cumulative weights for inverse-CDF sampling; back() == 1 exactly.
  [[nodiscard]] const std::vector<double>& cumulative() const { return cdf_; }

  /// Index of the atom selected by a uniform u in [0,1).
  [[nodiscard]] std::size_t select(double u) const;

 private:
  int d_ = 0;
  std::vector<PerturbationAtom> atoms_;
  Eigen::VectorXd mean_;
  std::vector<double> cdf_;
};

/// C_{e,e'} = Cov(xi(0,e), xi(0,e')).
Eigen::MatrixXd covariance(const PerturbationLaw& nu);

/// E[xibar(e) xibar(e') xibar(e'')].
ThirdMoments third_moments(const PerturbationLaw& nu);

}  // namespace rwre
