#include <doctest.h>

#include <cmath>
#include <random>

#include "rwre/expansion.hpp"
#include "rwre/fixtures.hpp"

using namespace rwre;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

JTable table(const Eigen::VectorXd& values) {
  JTable j;
  j.dim = static_cast<int>(values.size()) / 2;
  j.values = values;
  return j;
}

}  // namespace

TEST_SUITE("expansion") {

TEST_CASE("p2 basics") {
  const JTable j = table(vec({-1.0, 0.2, -0.4, 0.3}));
  CHECK(p2(Eigen::MatrixXd::Zero(4, 4), j).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd C = covariance(PerturbationLaw::symmetric_pair(2, speedup_vector()));
  const Eigen::VectorXd d2 = directional_sum(p2(C, j), 2);
  CHECK(std::abs(d2(0)) < 1e-15);
  const double expected = 2.0 * (j.values(1) + j.values(0)) - 4.0 * j.values(3);
  CHECK(std::abs(d2(1) - expected) < 1e-14);
}

TEST_CASE("one-dimensional second-order term") {
  const ModelSpec m = fixture("d1-twopoint");
  const double sigma2 = covariance(m.nu())(0, 0);
  for (double g : {0.1, 0.05, -0.05}) {
    const ExpansionReport r = speed_expansion(m, g, 2);
    const double expected = -2.0 * sigma2 / (m.p0()[0] + g * m.p1()(0));
    CHECK(std::abs(r.d2_gamma(0) - expected) < 1e-13);
  }
}

TEST_CASE("p3 against a direct sum over atoms") {
  const PerturbationLaw nu(2, {{0.7, vec({0.3, -0.1, 0.2, -0.4})}, {0.3, vec({-0.7, 0.4, -0.2, 0.5})}});
  const JTable j = table(vec({-1.3, -0.2, -0.7, -0.4}));
  const Eigen::VectorXd got = p3(third_moments(nu), j);
  Eigen::VectorXd brute = Eigen::VectorXd::Zero(4);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const Eigen::VectorXd xi = nu.centered(a);
    for (int e = 0; e < 4; ++e)
      for (int e1 = 0; e1 < 4; ++e1)
        for (int e2 = 0; e2 < 4; ++e2) brute(e) += nu.atoms()[a].weight * xi(e) * xi(e1) * xi(e2) * j.values(e1) * j.values(e2);
  }
  CHECK((got - brute).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(got.cwiseAbs().maxCoeff() > 1e-3);
  CHECK(p3(third_moments(PerturbationLaw::symmetric_pair(2, speedup_vector())), j).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("report invariants") {
  for (const char* name : {"d1-twopoint", "skewed-1d", "drifted-2d"}) {
    const ModelSpec m = fixture(name);
    const double g = 0.07;
    const ExpansionReport r = speed_expansion(m, g, 3);
    REQUIRE(r.v_order[3].has_value());
    CHECK(((*r.v_order[1]) - (m.d0() + g * m.d1())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(((*r.v_order[2]) - (*r.v_order[1] + g * g * r.d2_gamma)).cwiseAbs().maxCoeff() < 1e-16);
    CHECK(((*r.v_order[3]) - (*r.v_order[2]) - std::pow(g, 3) * (*r.d3)).cwiseAbs().maxCoeff() < 1e-16);
  }
  const ExpansionReport s = speed_expansion(fixture("d1-twopoint"), 0.1, 3);
  CHECK(s.d3->cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("degenerate law: every order equals the mean drift") {
  const ModelSpec m(TransitionKernel(2, vec({0.3, 0.2, 0.25, 0.25})), PerturbationLaw(2, {{1.0, vec({0.1, -0.1, 0.0, 0.0})}}), 0.1, 0.2);
  const ExpansionReport r = speed_expansion(m, 0.1, 3);
  for (int k = 1; k <= 3; ++k) CHECK(((*r.v_order[static_cast<std::size_t>(k)]) - (m.d0() + 0.1 * m.d1())).cwiseAbs().maxCoeff() < 1e-16);
  CHECK(r.d2_gamma.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.d3->cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("preconditions") {
  const ModelSpec flat(TransitionKernel::simple(1), PerturbationLaw::symmetric_pair(1, vec({0.2, -0.2})), 0.1, 0.2);
  CHECK_THROWS_AS(speed_expansion(flat, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(speed_expansion(fixture("sym-2d"), 0.1, 3), std::invalid_argument);
  CHECK_THROWS_AS(speed_expansion(fixture("drifted-2d"), 0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(solomon_speed(flat, 0.1), std::domain_error);
}

TEST_CASE("exact speed in one dimension") {
  const ModelSpec det(TransitionKernel(1, vec({0.7, 0.3})), PerturbationLaw(1, {{1.0, vec({0.0, 0.0})}}), 0.1, 0.2);
  CHECK(std::abs(solomon_speed(det, 0.1) - 0.4) < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = 0.56 + 0.3 * u(rng);
    const double a = 0.2 * u(rng), b = -0.2 * u(rng);
    const double w = 0.1 + 0.8 * u(rng);
    const ModelSpec m(TransitionKernel(1, vec({p, 1 - p})), PerturbationLaw(1, {{w, vec({a, -a})}, {1 - w, vec({b, -b})}}), 0.05, 0.5);
    const double mean_drift = drift(m.p_gamma(0.25))(0);
    const double v = solomon_speed(m, 0.25);
    CHECK(v <= mean_drift + 1e-15);
    CHECK(v > 0.0);
  }
  const ModelSpec mirror(TransitionKernel(1, vec({0.3, 0.7})), PerturbationLaw::symmetric_pair(1, vec({0.5, -0.5})), 0.1, 0.2);
  CHECK(solomon_speed(mirror, 0.1) < 0.0);
}

TEST_CASE("second-order remainder is cubic in one dimension") {
  const ModelSpec m = fixture("skewed-1d");
  std::vector<double> scaled;
  for (double g : {0.08, 0.04, 0.02}) {
    const ExpansionReport r = speed_expansion(m, g, 2);
    scaled.push_back(std::abs(solomon_speed(m, g) - (*r.v_order[2])(0)) / std::pow(g, 3));
  }
  for (double s : scaled) CHECK(s < 2.0 * scaled.back());
}

TEST_CASE("second-order discontinuity at zero mean drift") {
  const ModelSpec m(TransitionKernel::simple(1), PerturbationLaw(1, {{0.5, vec({1.0, -1.0})}, {0.5, vec({0.0, 0.0})}}), 0.1, 0.3);
  const double sigma2 = covariance(m.nu())(0, 0);
  const ExpansionReport r = speed_expansion(m, 1e-6, 2);
  CHECK(std::abs(r.d2_gamma(0) + 4.0 * sigma2) < 1e-4);
  const ExpansionReport l = speed_expansion(m, -1e-6, 2);
  CHECK(std::abs(l.d2_gamma(0) - 4.0 * sigma2) < 1e-4);
}

TEST_CASE("speedup integral") {
  const SpeedupIntegral half = speedup_integral(0.5);
  CHECK(half.value > 0.0);
  CHECK(half.doubling_diff <= 1e-6);
  CHECK(std::abs(speedup_integral(1e-4, 512).value) < 1e-3);
  double prev = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double v = speedup_integral(0.1 * i, 512, 1e-4).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(speedup_integral(1.0), std::invalid_argument);
  CHECK_THROWS_AS(speedup_integral(0.0), std::invalid_argument);
}

TEST_CASE("speedup second-order term points along the mean drift") {
  const ModelSpec m = fixture("speedup-s2");
  const ExpansionReport r = speed_expansion(m, 0.1, 2);
  REQUIRE(r.d2.has_value());
  CHECK((*r.d2)(1) > 0.0);
  CHECK(r.d2_gamma(1) > 0.0);
  CHECK(std::abs((*r.d2)(0)) < 1e-12);
}

}  // TEST_SUITE
