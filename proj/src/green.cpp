#include "rwre/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace rwre {

namespace {

// Above this size the transient system is factored as a sparse matrix.
constexpr std::size_t kDenseLimit = 500;

void check_inputs(const Domain& domain, double delta, const SiteKernels& kernels) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0,1]");
  if (domain.interior_size() > kMaxDomainSites) throw std::invalid_argument("domain too large for solver");
  if (kernels.size() != domain.interior_size()) throw std::invalid_argument("one kernel per interior site required");
  for (const auto& k : kernels) {
    if (k.dim() != domain.dim()) throw std::invalid_argument("kernel dimension does not match domain");
  }
}

// Solves A^T g = 1_{z0} (transpose) or A g = 1_{z0}, with A = I - delta P_UU.
Eigen::VectorXd solve_unit(const Domain& domain, double delta, const SiteKernels& kernels, std::size_t z0,
                           bool transpose) {
  const auto n = static_cast<Eigen::Index>(domain.interior_size());
  const int nd = 2 * domain.dim();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(static_cast<Eigen::Index>(z0)) = 1.0;

  if (domain.interior_size() <= kDenseLimit) {
    Eigen::MatrixXd At = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int e = 0; e < nd; ++e) {
        const auto j = static_cast<Eigen::Index>(domain.neighbour(static_cast<std::size_t>(i), e));
        if (j >= n) continue;
        const double w = delta * kernels[static_cast<std::size_t>(i)][e];
        if (transpose) {
          At(j, i) -= w;
        } else {
          At(i, j) -= w;
        }
      }
    }
    return At.partialPivLu().solve(rhs);
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * (nd + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 1.0);
    for (int e = 0; e < nd; ++e) {
      const auto j = static_cast<Eigen::Index>(domain.neighbour(static_cast<std::size_t>(i), e));
      if (j >= n) continue;
      const double w = -delta * kernels[static_cast<std::size_t>(i)][e];
      if (transpose) {
        trip.emplace_back(j, i, w);
      } else {
        trip.emplace_back(i, j, w);
      }
    }
  }
  Eigen::SparseMatrix<double> At(n, n);
  At.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(At);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse factorisation failed");
  Eigen::VectorXd g = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse solve failed");
  return g;
}

}  // namespace

SiteKernels kernels_on(const Domain& domain, const EnvironmentView& env) {
  SiteKernels out;
  out.reserve(domain.interior_size());
  for (const auto& z : domain.interior()) out.push_back(env.kernel(z));
  return out;
}

double GreenTable::operator()(const Site& z) const {
  const auto i = domain->index_of(z);
  return i < 0 ? 0.0 : values(i);
}

double GreenTable::balance_residual(const SiteKernels& kernels) const {
  const int nd = 2 * domain->dim();
  Eigen::VectorXd flow = Eigen::VectorXd::Zero(values.size());
  flow(static_cast<Eigen::Index>(z0_index)) = 1.0;
  for (std::size_t i = 0; i < domain->interior_size(); ++i) {
    for (int e = 0; e < nd; ++e) {
      flow(static_cast<Eigen::Index>(domain->neighbour(i, e))) +=
          values(static_cast<Eigen::Index>(i)) * delta * kernels[i][e];
    }
  }
  return (flow - values).cwiseAbs().maxCoeff();
}

GreenTable green_finite(std::shared_ptr<const Domain> domain, double delta, const SiteKernels& kernels,
                        const Site& z0) {
  check_inputs(*domain, delta, kernels);
  const auto z0_index = domain->index_of(z0);
  if (z0_index < 0 || static_cast<std::size_t>(z0_index) >= domain->interior_size()) {
    throw std::invalid_argument("source z0 must be an interior site");
  }
  const std::size_t n = domain->interior_size();
  const Eigen::VectorXd g = solve_unit(*domain, delta, kernels, static_cast<std::size_t>(z0_index), true);

  GreenTable table;
  table.z0 = z0;
  table.z0_index = static_cast<std::size_t>(z0_index);
  table.delta = delta;
  table.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain->size()));
  table.values.head(static_cast<Eigen::Index>(n)) = g;
  const int nd = 2 * domain->dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (int e = 0; e < nd; ++e) {
      const std::size_t j = domain->neighbour(i, e);
      if (j >= n) table.values(static_cast<Eigen::Index>(j)) += table.values(static_cast<Eigen::Index>(i)) * delta * kernels[i][e];
    }
  }
  table.domain = std::move(domain);
  return table;
}

GreenTable green_finite(std::shared_ptr<const Domain> domain, double delta, const EnvironmentView& env,
                        const Site& z0) {
  SiteKernels kernels = kernels_on(*domain, env);
  return green_finite(std::move(domain), delta, kernels, z0);
}

Eigen::VectorXd green_column(const Domain& domain, double delta, const SiteKernels& kernels, const Site& y) {
  check_inputs(domain, delta, kernels);
  const auto yi = domain.index_of(y);
  if (yi < 0 || static_cast<std::size_t>(yi) >= domain.interior_size()) {
    throw std::invalid_argument("target must be an interior site");
  }
  return solve_unit(domain, delta, kernels, static_cast<std::size_t>(yi), false);
}

Eigen::MatrixXd green_matrix(const Domain& domain, double delta, const SiteKernels& kernels) {
  check_inputs(domain, delta, kernels);
  if (domain.interior_size() > kDenseLimit) throw std::invalid_argument("green_matrix is for small domains");
  const auto n = static_cast<Eigen::Index>(domain.interior_size());
  const auto m = static_cast<Eigen::Index>(domain.size());
  const int nd = 2 * domain.dim();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd exit_block = Eigen::MatrixXd::Zero(n, m - n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int e = 0; e < nd; ++e) {
      const auto j = static_cast<Eigen::Index>(domain.neighbour(static_cast<std::size_t>(i), e));
      const double w = delta * kernels[static_cast<std::size_t>(i)][e];
      if (j < n) {
        A(i, j) -= w;
      } else {
        exit_block(i, j - n) += w;
      }
    }
  }
  Eigen::MatrixXd G(n, m);
  G.leftCols(n) = A.partialPivLu().inverse();
  G.rightCols(m - n) = G.leftCols(n) * exit_block;
  return G;
}

}  // namespace rwre
