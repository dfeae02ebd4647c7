#include <doctest.h>

#include <cmath>

#include "rwre/expansion.hpp"
#include "rwre/fixtures.hpp"
#include "rwre/lemma4.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/parallel.hpp"

using namespace rwre;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double binomial_half(long n, long k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("seeds are distinct per replicate and tag") {
  CHECK(environment_seed(1, 0) != environment_seed(1, 1));
  CHECK(environment_seed(1, 0) != walk_seed(1, 0));
  CHECK(environment_seed(1, 0) != environment_seed(2, 0));
}

TEST_CASE("deterministic environment: law of large numbers") {
  const ModelSpec m(TransitionKernel(2, vec({0.3, 0.2, 0.3, 0.2})), PerturbationLaw(2, {{1.0, vec({0.1, -0.1, 0.0, 0.0})}}), 0.1, 0.2);
  SimParams sim;
  sim.n_steps = 5000;
  sim.n_replicates = 200;
  sim.master_seed = 3;
  const SimEstimate est = annealed_speed(m, 0.15, sim);
  const Eigen::VectorXd mean = m.d0() + 0.15 * m.d1();
  for (int i = 0; i < 2; ++i) {
    CHECK(est.stderr_v(i) > 0.0);
    CHECK(std::abs(est.v_hat(i) - mean(i)) <= 4 * est.stderr_v(i));
  }
}

TEST_CASE("simulation is reproducible across thread counts") {
  const ModelSpec m = fixture("drifted-2d");
  SimParams sim;
  sim.n_steps = 3000;
  sim.n_replicates = 37;
  sim.master_seed = 8;
  set_num_threads(1);
  const SimEstimate a = annealed_speed(m, 0.1, sim);
  set_num_threads(3);
  const SimEstimate b = annealed_speed(m, 0.1, sim);
  const auto ends = simulate_endpoints(m, 0.1, sim);
  set_num_threads(1);
  CHECK((a.v_hat.array() == b.v_hat.array()).all());
  CHECK((a.stderr_v.array() == b.stderr_v.array()).all());
  CHECK(ends == simulate_endpoints(m, 0.1, sim));
}

TEST_CASE("first step follows the mean kernel") {
  const ModelSpec m = fixture("drifted-2d");
  SimParams sim;
  sim.n_steps = 1;
  sim.n_replicates = 100000;
  sim.master_seed = 12;
  const auto ends = simulate_endpoints(m, 0.2, sim);
  const TransitionKernel p = m.p_gamma(0.2);
  for (int e = 0; e < 4; ++e) {
    const Site target = step(origin(), e);
    long hits = 0;
    for (const auto& z : ends) hits += z == target;
    const double n = static_cast<double>(ends.size());
    CHECK(std::abs(hits - n * p[e]) <= 4 * std::sqrt(n * p[e] * (1 - p[e])));
  }
}

TEST_CASE("simulation argument checks") {
  SimParams sim;
  sim.n_steps = 0;
  CHECK_THROWS_AS(annealed_speed(fixture("d1-twopoint"), 0.1, sim), std::invalid_argument);
  sim.n_steps = 10;
  sim.n_replicates = 1;
  CHECK_THROWS_AS(annealed_speed(fixture("d1-twopoint"), 0.1, sim), std::invalid_argument);
}

TEST_CASE("first-order scaling slope is two") {
  const ScalingReport r = order_scaling(fixture("skewed-1d"), {0.08, 0.04, 0.02}, 1, {}, ScalingReference::exact_1d);
  CHECK_FALSE(r.noise_floor);
  CHECK(std::abs(r.slope - 2.0) <= 0.4);
}

TEST_CASE("walk law of the simple planar walk") {
  // In rotated coordinates u = x + y, v = x - y the two components are
  // independent simple walks on Z.
  const long n = 12;
  const auto law = walk_law(TransitionKernel::simple(2), n, static_cast<int>(n));
  const long side = 2 * n + 1;
  double total = 0.0;
  for (long y = -n; y <= n; ++y)
    for (long x = -n; x <= n; ++x) {
      const double got = law[static_cast<std::size_t>((y + n) * side + (x + n))];
      double expected = 0.0;
      const long u = x + y, v = x - y;
      if ((n + u) % 2 == 0 && (n + v) % 2 == 0) expected = binomial_half(n, (n + u) / 2) * binomial_half(n, (n + v) / 2);
      CHECK(std::abs(got - expected) < 1e-15);
      CHECK(got == law[static_cast<std::size_t>((n - y) * side + (n - x))]);
      total += got;
    }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("kernel decay table") {
  const TransitionKernel s(2, vec({0.3, 0.3, 0.2, 0.2}));
  const std::vector<long> ns{4, 16, 64, 256};
  const DecayTable full = lemma4_decay(s, ns, {0, 1, 2, 3});
  CHECK(full.max_mass_defect <= 1e-12);
  for (Eigen::Index i = 0; i < full.l1.rows(); ++i) {
    CHECK(full.l1(i, 0) == doctest::Approx(full.l1(i, 1)).epsilon(1e-12));
    CHECK(full.l1(i, 2) == doctest::Approx(full.l1(i, 3)).epsilon(1e-12));
    for (Eigen::Index j = 0; j < full.l1.cols(); ++j) {
      CHECK(full.l1(i, j) >= 0.0);
      CHECK(full.l1(i, j) <= 2.0);
    }
  }
  for (Eigen::Index i = 1; i < full.l1.rows(); ++i) CHECK(full.l1(i, 0) < full.l1(i - 1, 0));
  Lemma4Options par;
  par.parity_only = true;
  const DecayTable parity = lemma4_decay(s, ns, {0, 1, 2, 3}, par);
  CHECK((parity.l1 - full.l1).cwiseAbs().maxCoeff() < 1e-14);

  // Small n: the truncated table equals a direct difference of two walk laws.
  const long n = 6;
  const auto pn1 = walk_law(s, n + 1, static_cast<int>(n + 2));
  const auto pn = walk_law(s, n, static_cast<int>(n + 2));
  const long side = 2 * (n + 2) + 1;
  double l1 = 0.0;
  for (long y = 0; y < side; ++y)
    for (long x = 0; x < side; ++x) {
      // p_n(e1, z) = p_n(0, z - e1)
      const double shifted = x >= 1 ? pn[static_cast<std::size_t>(y * side + x - 1)] : 0.0;
      l1 += std::abs(pn1[static_cast<std::size_t>(y * side + x)] - shifted);
    }
  const DecayTable one = lemma4_decay(s, {n}, {0});
  CHECK(std::abs(one.l1(0, 0) - l1) < 1e-13);

  CHECK_THROWS_AS(lemma4_decay(TransitionKernel(2, vec({0.4, 0.2, 0.2, 0.2})), ns, {0}), std::invalid_argument);
  CHECK_THROWS_AS(lemma4_decay(s, {64, 16}, {0}), std::invalid_argument);
  Lemma4Options tiny;
  tiny.memory_budget = 1024;
  CHECK_THROWS_AS(lemma4_decay(s, {4096}, {0}, tiny), std::length_error);
}

}  // TEST_SUITE
