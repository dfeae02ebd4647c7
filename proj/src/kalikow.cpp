#include "rwre/kalikow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwre/environment.hpp"
#include "rwre/fit.hpp"
#include "rwre/hull.hpp"
#include "rwre/parallel.hpp"

namespace rwre {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kNoiseFloor = 1e-13;
constexpr std::size_t kMaxChunks = 1024;

// m^n, or budget + 1 once it exceeds the budget.
std::uint64_t capped_power(std::size_t m, std::size_t n, std::uint64_t budget) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > budget / std::max<std::size_t>(m, 1)) return budget + 1;
    out *= m;
  }
  return out;
}

std::vector<TransitionKernel> atom_kernels(const ModelSpec& model, double gamma) {
  std::vector<TransitionKernel> out;
  for (std::size_t a = 0; a < model.nu().size(); ++a) out.push_back(model.site_kernel(gamma, a));
  return out;
}

// Splits [0, total) into at most kMaxChunks contiguous ranges, runs
// visit(i, acc) over each with a private accumulator, and adds the partial
// results in chunk order.
template <typename Acc, typename Visit>
Acc chunked_reduce(std::uint64_t total, const Acc& zero, Visit&& visit) {
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kMaxChunks));
  std::vector<Acc> partial(chunks, zero);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
    for (std::uint64_t i = lo; i < hi; ++i) visit(i, partial[c]);
  });
  Acc out = zero;
  for (const auto& p : partial) out += p;
  return out;
}

struct AuxAcc {
  Eigen::MatrixXd num;
  Eigen::VectorXd green;
  AuxAcc& operator+=(const AuxAcc& o) {
    num += o.num;
    green += o.green;
    return *this;
  }
};

void finish_kernels(const ModelSpec& model, AuxiliaryKernel& out, const Eigen::MatrixXd& num,
                    const Eigen::VectorXd& den, double gamma) {
  const int d = model.dim();
  const double kappa0 = model.kappa0();
  out.kernels.clear();
  out.weights_checked = true;
  for (Eigen::Index x = 0; x < num.rows(); ++x) {
    if (!(den(x) > 0.0)) {
      out.kernels.push_back(model.p_gamma(gamma));
      continue;
    }
    Eigen::VectorXd row = num.row(x).transpose() / den(x);
    TransitionKernel k(d, row);
    if (k.min_prob() < kappa0 - kExactTol || k.probs().maxCoeff() > 1.0 - kappa0 + kExactTol) {
      out.weights_checked = false;
    }
    out.kernels.push_back(std::move(k));
  }
}

AuxiliaryKernel exact_kernel(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain,
                             double delta, const Site& z0, std::uint64_t total) {
  const std::size_t n = domain->interior_size();
  const int nd = 2 * model.dim();
  const auto atoms = atom_kernels(model, gamma);
  const std::size_t m = atoms.size();
  AuxAcc zero{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), nd),
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain->size()))};

  AuxAcc acc = chunked_reduce(total, zero, [&](std::uint64_t i, AuxAcc& a) {
    SiteKernels kernels;
    kernels.reserve(n);
    double w = 1.0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t atom = i % m;
      i /= m;
      w *= model.nu().atoms()[atom].weight;
      kernels.push_back(atoms[atom]);
    }
    if (w == 0.0) return;
    const GreenTable g = green_finite(domain, delta, kernels, z0);
    for (std::size_t x = 0; x < n; ++x) {
      const double gx = w * g.values(static_cast<Eigen::Index>(x));
      a.num.row(static_cast<Eigen::Index>(x)) += gx * kernels[x].probs().transpose();
    }
    a.green += w * g.values;
  });

  AuxiliaryKernel out;
  out.domain = domain;
  out.delta = delta;
  out.z0 = z0;
  out.method = AuxMethod::exact_enumeration;
  out.environments = total;
  out.mean_green = acc.green;
  out.kernel_stderr = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), nd);
  finish_kernels(model, out, acc.num, acc.green.head(static_cast<Eigen::Index>(n)), gamma);
  return out;
}

AuxiliaryKernel sampled_kernel(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain,
                               double delta, const Site& z0, const AuxOptions& opt) {
  const std::size_t n = domain->interior_size();
  const int nd = 2 * model.dim();
  const std::size_t M = opt.mc_samples;
  if (M < 2) throw std::invalid_argument("Monte Carlo auxiliary kernel needs at least two samples");
  const auto atoms = atom_kernels(model, gamma);

  std::vector<Eigen::VectorXd> green(M);
  std::vector<std::vector<std::size_t>> atom_of(M);
  parallel_for(M, [&](std::size_t s) {
    const std::uint64_t env_seed = mix64(opt.seed, s);
    SiteKernels kernels;
    kernels.reserve(n);
    atom_of[s].resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      atom_of[s][x] = sample_atom(model.nu(), env_seed, domain->interior()[x]);
      kernels.push_back(atoms[atom_of[s][x]]);
    }
    green[s] = green_finite(domain, delta, kernels, z0).values;
  });

  Eigen::VectorXd mean_green = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain->size()));
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), nd);
  for (std::size_t s = 0; s < M; ++s) {
    mean_green += green[s];
    for (std::size_t x = 0; x < n; ++x) {
      num.row(static_cast<Eigen::Index>(x)) +=
          green[s](static_cast<Eigen::Index>(x)) * atoms[atom_of[s][x]].probs().transpose();
    }
  }
  mean_green /= static_cast<double>(M);
  num /= static_cast<double>(M);

  AuxiliaryKernel out;
  out.domain = domain;
  out.delta = delta;
  out.z0 = z0;
  out.method = AuxMethod::monte_carlo;
  out.environments = M;
  out.mean_green = mean_green;
  const Eigen::VectorXd den = mean_green.head(static_cast<Eigen::Index>(n));
  finish_kernels(model, out, num, den, gamma);

  // Delta method for the ratio estimator.
  out.kernel_stderr = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), nd);
  for (std::size_t x = 0; x < n; ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    if (!(den(xi) > 0.0)) continue;
    for (int e = 0; e < nd; ++e) {
      const double r = out.kernels[x][e];
      double ss = 0.0;
      for (std::size_t s = 0; s < M; ++s) {
        const double g = green[s](xi);
        const double res = g * atoms[atom_of[s][x]][e] - r * g;
        ss += res * res;
      }
      out.kernel_stderr(xi, e) = std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M)) / den(xi);
    }
  }
  return out;
}

}  // namespace

std::string to_string(AuxMethod m) {
  return m == AuxMethod::exact_enumeration ? "exact-enumeration" : "monte-carlo";
}

AuxiliaryKernel auxiliary_kernel(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain,
                                 double delta, const Site& z0, const AuxOptions& opt) {
  model.check_gamma(gamma);
  if (domain->dim() != model.dim()) throw std::invalid_argument("domain and model dimensions differ");
  if (!domain->contains(z0)) throw std::invalid_argument("z0 must be an interior site");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
  const std::uint64_t total = capped_power(model.nu().size(), domain->interior_size(), opt.budget);
  if (total <= opt.budget) return exact_kernel(model, gamma, std::move(domain), delta, z0, total);
  if (opt.mc_samples == 0) throw std::invalid_argument("environment enumeration exceeds the budget");
  return sampled_kernel(model, gamma, std::move(domain), delta, z0, opt);
}

double verify_prop1(const ModelSpec& model, double gamma, std::shared_ptr<const Domain> domain, double delta,
                    const Site& z0) {
  const AuxiliaryKernel aux = auxiliary_kernel(model, gamma, domain, delta, z0);
  const GreenTable hat = green_finite(domain, delta, aux.kernels, z0);
  return (aux.mean_green - hat.values).cwiseAbs().maxCoeff();
}

Lemma1Result& operator+=(Lemma1Result& a, const Lemma1Result& b) {
  a.checked += b.checked;
  a.violations_first += b.violations_first;
  a.violations_second += b.violations_second;
  a.worst_first = std::max(a.worst_first, b.worst_first);
  a.worst_second = std::max(a.worst_second, b.worst_second);
  return a;
}

Lemma1Result lemma1_check(const Domain& domain, double delta, const SiteKernels& omega, std::size_t z,
                          const Eigen::VectorXd& d_omega, double kappa0) {
  const std::size_t n = domain.interior_size(), m = domain.size();
  const int d = domain.dim();
  if (z >= n) throw std::invalid_argument("perturbed site must be interior");
  SiteKernels perturbed = omega;
  perturbed[z] = TransitionKernel::unchecked(d, omega[z].probs() + d_omega);
  const Eigen::MatrixXd G = green_matrix(domain, delta, omega);
  const Eigen::MatrixXd Gp = green_matrix(domain, delta, perturbed);

  const double sup = d_omega.cwiseAbs().maxCoeff();
  const double c1 = 2.0 * d * sup / (kappa0 * kappa0);
  const double c2 = std::pow(2.0 * d * sup, 2) / std::pow(kappa0, 3);

  Lemma1Result out;
  auto record = [](double lhs, double rhs, double slack, int& violations, double& worst) {
    if (lhs > rhs + slack) ++violations;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  };
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t yp = 0; yp < m; ++yp) {
      const double gp = Gp(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(yp));
      const double g = G(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(yp));
      double first_order = 0.0;
      for (int e = 0; e < 2 * d; ++e) {
        first_order += d_omega(e) * (delta * green_entry(domain, G, domain.neighbour(z, e), yp) -
                                     G(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(yp)));
      }
      first_order *= G(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(z));
      const double slack = kBoundSlack * std::max(1.0, gp);
      record(std::abs(gp - g), c1 * gp, slack, out.violations_first, out.worst_first);
      record(std::abs(gp - g - first_order), c2 * gp, slack, out.violations_second, out.worst_second);
      ++out.checked;
    }
  }
  return out;
}

Lemma2Report lemma2_scaling(const ModelSpec& model, std::shared_ptr<const Domain> domain, double delta,
                            const Site& z0, const std::vector<double>& gammas) {
  if (gammas.empty()) throw std::invalid_argument("lemma2_scaling needs at least one gamma");
  const std::size_t n = domain->interior_size();
  const int d = model.dim();
  const int nd = 2 * d;
  const std::size_t m = model.nu().size();
  const std::uint64_t others = capped_power(m, n - 1, kDefaultEnumerationBudget);
  if (others > kDefaultEnumerationBudget) throw std::invalid_argument("domain too large for exact enumeration");
  const auto z0_index = static_cast<Eigen::Index>(domain->index_of(z0));
  const Eigen::MatrixXd C = covariance(model.nu());

  Lemma2Report report;
  for (double gamma : gammas) {
    const AuxiliaryKernel aux = auxiliary_kernel(model, gamma, domain, delta, z0);
    const auto atoms = atom_kernels(model, gamma);
    const TransitionKernel mean = model.p_gamma(gamma);

    std::vector<Eigen::VectorXd> jt(n);
    std::vector<Lemma1Result> l1(n);
    parallel_for(n, [&](std::size_t y) {
      Eigen::VectorXd num = Eigen::VectorXd::Zero(nd);
      double den = 0.0;
      for (std::uint64_t i = 0; i < others; ++i) {
        SiteKernels kernels(n, mean);
        double w = 1.0;
        std::uint64_t code = i;
        for (std::size_t x = 0; x < n; ++x) {
          if (x == y) continue;
          const std::size_t atom = code % m;
          code /= m;
          w *= model.nu().atoms()[atom].weight;
          kernels[x] = atoms[atom];
        }
        if (w == 0.0) continue;
        const Eigen::VectorXd col = green_column(*domain, delta, kernels, domain->site(y));
        const double g0y = col(z0_index), gyy = col(static_cast<Eigen::Index>(y));
        for (int e = 0; e < nd; ++e) {
          const std::size_t nb = domain->neighbour(y, e);
          const double g_nb = nb < n ? col(static_cast<Eigen::Index>(nb)) : 0.0;
          num(e) += w * g0y * (delta * g_nb - gyy);
        }
        den += w * g0y;

        // Every full environment agreeing with this one off y, against its
        // one-point modification at y.
        for (std::size_t a = 0; a < m; ++a) {
          if (model.nu().atoms()[a].weight == 0.0) continue;
          SiteKernels omega = kernels;
          omega[y] = atoms[a];
          l1[y] += lemma1_check(*domain, delta, omega, y, mean.probs() - atoms[a].probs(), model.kappa0());
        }
      }
      jt[y] = num / den;
    });

    double residual = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const Eigen::VectorXd pred = mean.probs() + gamma * gamma * C * jt[y];
      residual = std::max(residual, (aux.kernels[y].probs() - pred).cwiseAbs().maxCoeff());
      report.lemma1 += l1[y];
    }
    const double bound = 2.0 * std::pow(2.0 * d, 2) / std::pow(model.kappa0(), 4) * std::pow(std::abs(gamma), 3);
    report.points.push_back({gamma, residual, bound});
    report.bound_ok = report.bound_ok && residual <= bound;
  }

  std::vector<double> gs, rs;
  for (const auto& p : report.points) {
    if (p.residual < kNoiseFloor) report.noise_floor = true;
    gs.push_back(std::abs(p.gamma));
    rs.push_back(p.residual);
  }
  if (report.noise_floor || report.points.size() < 2) {
    report.exponent = std::numeric_limits<double>::quiet_NaN();
  } else {
    report.exponent = loglog_fit(gs, rs).slope;
  }
  return report;
}

DriftField drift_field(const ModelSpec& model, double gamma, const DriftFieldOptions& opt) {
  if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw std::invalid_argument("drift_field needs 0 < delta < 1");
  if (opt.window_radius < 0) throw std::invalid_argument("window radius must be non-negative");
  model.check_gamma(gamma);
  const int d = model.dim();
  const int w = opt.window_radius;
  const Eigen::VectorXd mean_drift = model.d0() + gamma * model.d1();

  auto make_box = [&](int fwd, int back) {
    Site lo = origin(), hi = origin();
    for (int i = 0; i < d; ++i) {
      const double c = mean_drift(i);
      const int up = c > kExactTol ? fwd : back;
      const int down = c < -kExactTol ? fwd : back;
      lo[i] = -w - down;
      hi[i] = w + up;
    }
    return std::make_shared<const Domain>(Domain::box(d, lo, hi));
  };
  auto box_sites = [&](int fwd, int back) {
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) {
      const double c = mean_drift(i);
      const int extent = 2 * w + 1 + (std::abs(c) > kExactTol ? fwd + back : 2 * back);
      count *= static_cast<std::size_t>(extent);
    }
    return count;
  };

  int fwd = static_cast<int>(std::ceil(3.0 / (1.0 - opt.delta)));
  int back = static_cast<int>(std::ceil(1.0 / (1.0 - opt.delta)));
  while (box_sites(fwd, back) > kMaxDomainSites) {
    if (fwd <= 1 && back <= 1) throw std::invalid_argument("window too large for the solver");
    fwd = std::max(1, static_cast<int>(fwd * 0.9));
    back = std::max(1, static_cast<int>(back * 0.9));
  }

  AuxOptions aopt;
  aopt.budget = opt.budget;
  aopt.mc_samples = opt.mc_samples;
  aopt.seed = opt.seed;
  const AuxiliaryKernel big = auxiliary_kernel(model, gamma, make_box(fwd, back), opt.delta, origin(), aopt);
  const AuxiliaryKernel small =
      auxiliary_kernel(model, gamma, make_box((fwd + 1) / 2, (back + 1) / 2), opt.delta, origin(), aopt);

  DriftField out;
  out.method = big.method;
  out.delta = opt.delta;
  out.pad_forward = fwd;
  out.pad_back = back;
  const Domain window = Domain::cube(d, w);
  for (const Site& z : window.interior()) {
    const auto i = static_cast<std::size_t>(big.domain->index_of(z));
    const auto j = static_cast<std::size_t>(small.domain->index_of(z));
    const Eigen::VectorXd v = drift(big.kernels[i]);
    Eigen::VectorXd se_abs(d);
    for (int a = 0; a < d; ++a) {
      se_abs(a) = big.kernel_stderr(static_cast<Eigen::Index>(i), 2 * a) +
                  big.kernel_stderr(static_cast<Eigen::Index>(i), 2 * a + 1);
    }
    out.sites.push_back(z);
    out.drift.push_back(v);
    out.drift_stderr.push_back(se_abs);
    out.slack = std::max(out.slack, (v - drift(small.kernels[j])).cwiseAbs().maxCoeff());
  }
  if (d == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& v : out.drift) pts.emplace_back(v(0), v(1));
    out.hull = convex_hull(std::move(pts));
  }
  return out;
}

}  // namespace rwre
