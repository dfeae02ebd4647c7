#include "rwre/montecarlo.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwre/environment.hpp"
#include "rwre/expansion.hpp"
#include "rwre/fit.hpp"
#include "rwre/parallel.hpp"

namespace rwre {

namespace {

using Cdf = std::array<double, 2 * kMaxDim>;

std::vector<Cdf> atom_cdfs(const ModelSpec& model, double gamma) {
  const int nd = 2 * model.dim();
  std::vector<Cdf> out;
  for (std::size_t a = 0; a < model.nu().size(); ++a) {
    const TransitionKernel k = model.site_kernel(gamma, a);
    Cdf c{};
    double acc = 0.0;
    for (int e = 0; e < nd; ++e) {
      acc += k[e];
      c[static_cast<std::size_t>(e)] = acc;
    }
    c[static_cast<std::size_t>(nd - 1)] = 1.0;
    out.push_back(c);
  }
  return out;
}

Site run_walk(const ModelSpec& model, const std::vector<Cdf>& cdfs, long n_steps, std::uint64_t env_seed,
              std::uint64_t walk_key) {
  const int nd = 2 * model.dim();
  CounterStream rng(walk_key);
  Site z = origin();
  for (long t = 0; t < n_steps; ++t) {
    const Cdf& c = cdfs[sample_atom(model.nu(), env_seed, z)];
    const double u = rng.next();
    int e = 0;
    while (e < nd - 1 && u >= c[static_cast<std::size_t>(e)]) ++e;
    z = step(z, e);
  }
  return z;
}

}  // namespace

std::uint64_t environment_seed(std::uint64_t master_seed, std::uint64_t replicate) {
  return mix64(master_seed, mix64(replicate, kTagEnvironment));
}

std::uint64_t walk_seed(std::uint64_t master_seed, std::uint64_t replicate) {
  return mix64(master_seed, mix64(replicate, kTagWalk));
}

std::vector<Site> simulate_endpoints(const ModelSpec& model, double gamma, const SimParams& sim) {
  model.check_gamma(gamma);
  if (sim.n_steps < 1 || sim.n_steps >= kCoordLimit) {
    throw std::invalid_argument("n_steps must lie in [1, 2^20) so the walk stays in the packing box");
  }
  if (sim.n_replicates == 0) throw std::invalid_argument("at least one replicate is required");
  const auto cdfs = atom_cdfs(model, gamma);
  std::vector<Site> out(sim.n_replicates);
  parallel_for(sim.n_replicates, [&](std::size_t r) {
    out[r] = run_walk(model, cdfs, sim.n_steps, environment_seed(sim.master_seed, r), walk_seed(sim.master_seed, r));
  });
  return out;
}

SimEstimate annealed_speed(const ModelSpec& model, double gamma, const SimParams& sim) {
  if (sim.n_replicates < 2) throw std::invalid_argument("annealed_speed needs at least two replicates");
  const std::vector<Site> ends = simulate_endpoints(model, gamma, sim);
  const int d = model.dim();
  const double n = static_cast<double>(sim.n_steps);
  const double M = static_cast<double>(sim.n_replicates);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& z : ends) {
    for (int i = 0; i < d; ++i) mean(i) += z[i] / n;
  }
  mean /= M;
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(d);
  for (const auto& z : ends) {
    for (int i = 0; i < d; ++i) ss(i) += std::pow(z[i] / n - mean(i), 2);
  }
  SimEstimate out;
  out.gamma = gamma;
  out.v_hat = mean;
  out.stderr_v = (ss / (M - 1.0) / M).cwiseSqrt();
  out.n_steps = sim.n_steps;
  out.n_replicates = sim.n_replicates;
  out.master_seed = sim.master_seed;
  return out;
}

std::string to_string(ScalingReference r) { return r == ScalingReference::monte_carlo ? "monte-carlo" : "exact-1d"; }

ScalingReport order_scaling(const ModelSpec& model, const std::vector<double>& gammas, int order,
                            const SimParams& sim, ScalingReference reference) {
  if (gammas.size() < 2) throw std::invalid_argument("order_scaling needs at least two gammas");
  if (reference == ScalingReference::exact_1d && model.dim() != 1) {
    throw std::invalid_argument("the exact reference exists only in d = 1");
  }
  ScalingReport report;
  report.order = order;
  report.reference = reference;
  Eigen::VectorXd u = model.d0_zero() ? model.d1() : model.d0();
  if (u.norm() == 0.0) throw std::invalid_argument("hypothesis (H) violated: d0 = d1 = 0");
  u.normalize();
  report.direction = u;

  std::vector<double> xs, ys;
  for (double gamma : gammas) {
    const ExpansionReport ex = speed_expansion(model, gamma, order);
    ScalingPoint p;
    p.gamma = gamma;
    p.v_expansion = ex.v_order[static_cast<std::size_t>(order)]->dot(u);
    if (reference == ScalingReference::exact_1d) {
      p.v_reference = solomon_speed(model, gamma) * u(0);
      p.stderr_v = kExactReferenceStderr;
    } else {
      const SimEstimate est = annealed_speed(model, gamma, sim);
      p.v_reference = est.v_hat.dot(u);
      p.stderr_v = std::sqrt(est.stderr_v.cwiseProduct(u).squaredNorm());
    }
    p.error = std::abs(p.v_reference - p.v_expansion);
    p.above_floor = p.error > 5.0 * p.stderr_v;
    if (p.above_floor) {
      xs.push_back(std::abs(gamma));
      ys.push_back(p.error);
    }
    report.points.push_back(p);
  }
  report.noise_floor = xs.size() < 2;
  report.slope = report.noise_floor ? std::numeric_limits<double>::quiet_NaN() : loglog_fit(xs, ys).slope;
  return report;
}

}  // namespace rwre
