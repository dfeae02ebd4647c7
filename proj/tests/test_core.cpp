#include <doctest.h>

#include <cmath>
#include <random>

#include "rwre/environment.hpp"
#include "rwre/fixtures.hpp"
#include "rwre/model.hpp"
#include "rwre/perturbation.hpp"

using namespace rwre;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PerturbationLaw two_point_1d() {
  return PerturbationLaw(1, {{0.5, vec({1.0, -1.0})}, {0.5, vec({-1.0, 1.0})}});
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("direction indexing and keys") {
  for (int i = 0; i < 6; ++i) {
    const Direction e = Direction::from_index(i);
    CHECK(e.index() == i);
    CHECK(Direction::from_key(e.key()) == e);
    CHECK((-e).index() == opposite(i));
  }
  CHECK(Direction::from_index(3).key() == "-2");
  CHECK_THROWS_AS(pack(make_site({kCoordLimit, 0})), std::out_of_range);
  CHECK(pack(make_site({1, -1})) != pack(make_site({-1, 1})));
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(TransitionKernel(1, vec({0.7, 0.2})), std::invalid_argument);
  CHECK_THROWS_AS(TransitionKernel(1, vec({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(TransitionKernel(2, vec({0.5, 0.5})), std::invalid_argument);
  CHECK(TransitionKernel::simple(3).is_symmetric());
}

TEST_CASE("drift examples") {
  const Eigen::VectorXd d = drift(speedup_kernel(0.5, 0.1));
  CHECK(std::abs(d(0)) < 1e-15);
  CHECK(std::abs(d(1) - 0.1 * (1 - 0.5) / 2) < 1e-15);
  CHECK(drift(TransitionKernel::simple(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(drift(TransitionKernel(1, vec({0.7, 0.3})))(0) - 0.4) < 1e-15);
}

TEST_CASE("covariance of the two-point speedup law") {
  const Eigen::MatrixXd C = covariance(PerturbationLaw::symmetric_pair(2, speedup_vector()));
  CHECK(C(0, 0) == doctest::Approx(1.0));
  CHECK(C(3, 3) == doctest::Approx(4.0));
  CHECK(C(0, 3) == doctest::Approx(-2.0));
  CHECK(C(0, 2) == 0.0);
  CHECK((C - C.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance small cases") {
  CHECK(covariance(PerturbationLaw::degenerate(2)).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd C = covariance(two_point_1d());
  CHECK(C(0, 0) == doctest::Approx(1.0));
  CHECK(C(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("covariance matches atom enumeration on random laws") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    const int nd = 2 * d;
    std::vector<PerturbationAtom> atoms;
    std::vector<double> w;
    for (int a = 0; a < 4; ++a) w.push_back(0.1 + (u(rng) + 1.0));
    double total = 0.0;
    for (double x : w) total += x;
    for (int a = 0; a < 4; ++a) {
      Eigen::VectorXd U(nd);
      for (int e = 0; e < nd; ++e) U(e) = u(rng);
      U.array() -= U.mean();
      atoms.push_back({w[static_cast<std::size_t>(a)] / total, U});
    }
    const PerturbationLaw nu(d, atoms);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(nd);
    for (const auto& at : atoms) mean += at.weight * at.U;
    Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(nd, nd);
    for (const auto& at : atoms) brute += at.weight * (at.U - mean) * (at.U - mean).transpose();
    CHECK((covariance(nu) - brute).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("third moments") {
  const PerturbationLaw skew(1, {{2.0 / 3.0, vec({1.0, -1.0})}, {1.0 / 3.0, vec({-2.0, 2.0})}});
  CHECK(third_moments(skew)(0, 0, 0) == doctest::Approx(-2.0));
  CHECK(third_moments(PerturbationLaw::symmetric_pair(2, speedup_vector())).max_abs() < 1e-15);
  CHECK(third_moments(PerturbationLaw(1, {{1.0, vec({0.3, -0.3})}})).max_abs() == 0.0);
}

TEST_CASE("perturbation law validation") {
  CHECK_THROWS_AS(PerturbationLaw(1, {{0.5, vec({1.0, -1.0})}}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationLaw(1, {{1.0, vec({1.0, 1.0})}}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationLaw(1, {{1.5, vec({1.0, -1.0})}, {-0.5, vec({1.0, -1.0})}}), std::invalid_argument);
}

TEST_CASE("model admissibility") {
  const TransitionKernel p0(1, vec({0.6, 0.4}));
  CHECK_NOTHROW(ModelSpec(p0, two_point_1d(), 0.1, 0.2));
  CHECK_THROWS_AS(ModelSpec(p0, two_point_1d(), 0.1, 0.35), std::invalid_argument);
  const ModelSpec m(p0, two_point_1d(), 0.1, 0.2);
  CHECK_THROWS_AS(m.check_gamma(0.21), std::out_of_range);
  CHECK(m.hypothesis_h());
  const ModelSpec flat(TransitionKernel(1, vec({0.5, 0.5})), two_point_1d(), 0.1, 0.2);
  CHECK_FALSE(flat.hypothesis_h());
}

TEST_CASE("mean drift is bilinear in gamma") {
  for (const auto& name : fixture_names()) {
    const ModelSpec m = fixture(name);
    for (double g : {0.0, 0.03, -0.05, m.gamma_max()}) {
      const Eigen::VectorXd lhs = drift(m.p_gamma(g));
      const Eigen::VectorXd rhs = m.d0() + g * m.d1();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("every fixture kernel is elliptic") {
  for (const auto& name : fixture_names()) {
    const ModelSpec m = fixture(name);
    for (double g : {-m.gamma_max(), 0.5 * m.gamma_max(), m.gamma_max()}) {
      for (std::size_t a = 0; a < m.nu().size(); ++a) {
        const TransitionKernel k = m.site_kernel(g, a);
        CHECK(std::abs(k.probs().sum() - 1.0) <= 1e-12);
        CHECK(k.min_prob() >= m.kappa0() - 1e-15);
      }
    }
  }
}

TEST_CASE("sample_site") {
  SUBCASE("single atom gives the mean kernel") {
    const ModelSpec m(TransitionKernel(1, vec({0.6, 0.4})), PerturbationLaw(1, {{1.0, vec({0.5, -0.5})}}), 0.1, 0.2);
    for (int x = -5; x <= 5; ++x) {
      const auto s = sample_site(m, 0.1, 99, make_site({x}));
      CHECK(s.atom_index == 0);
      CHECK((s.kernel.probs() - m.p_gamma(0.1).probs()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("pure function of seed and site") {
    const ModelSpec m = fixture("drifted-2d");
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(-1000, 1000);
    for (int i = 0; i < 10000; ++i) {
      const std::uint64_t seed = rng();
      const Site z = make_site({c(rng), c(rng)});
      const auto a = sample_site(m, 0.1, seed, z), b = sample_site(m, 0.1, seed, z);
      REQUIRE(a.atom_index == b.atom_index);
      REQUIRE((a.kernel.probs().array() == b.kernel.probs().array()).all());
      REQUIRE((a.kernel.probs() - m.site_kernel(0.1, a.atom_index).probs()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("atom frequencies follow the weights") {
    const ModelSpec m = fixture("skewed-1d");
    const int n = 100000;
    int hits = 0;
    for (int x = 0; x < n; ++x) hits += sample_site(m, 0.05, 4242, make_site({x - n / 2})).atom_index == 0;
    const double w = m.nu().atoms()[0].weight;
    const double sigma = std::sqrt(n * w * (1 - w));
    CHECK(std::abs(hits - n * w) <= 4 * sigma);
  }
}

TEST_CASE("one-point modification") {
  const ModelSpec m = fixture("drifted-2d");
  const EnvironmentView env = EnvironmentView::sampled(m, 0.1, 5);
  const EnvironmentView mod = one_point_modification(m, 0.1, env, origin());
  CHECK((mod.kernel(origin()).probs() - m.p_gamma(0.1).probs()).cwiseAbs().maxCoeff() == 0.0);
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      const Site z = make_site({x, y});
      if (z == origin()) continue;
      CHECK((mod.kernel(z).probs().array() == env.kernel(z).probs().array()).all());
    }
  const EnvironmentView homog = EnvironmentView::homogeneous(m.p_gamma(0.1));
  const EnvironmentView same = one_point_modification(m, 0.1, homog, make_site({2, 1}));
  CHECK((same.kernel(make_site({2, 1})).probs().array() == homog.kernel(make_site({2, 1})).probs().array()).all());

  const ModelSpec single(TransitionKernel::simple(2), PerturbationLaw(2, {{1.0, vec({0.1, -0.1, 0.0, 0.0})}}), 0.1, 0.5);
  const EnvironmentView s = EnvironmentView::sampled(single, 0.2, 1);
  const EnvironmentView sm = one_point_modification(single, 0.2, s, make_site({1, 1}));
  CHECK((sm.kernel(make_site({1, 1})).probs() - s.kernel(make_site({1, 1})).probs()).cwiseAbs().maxCoeff() < 1e-16);

  const EnvironmentView tilde = mean_with_sampled_origin(m, 0.1, 1);
  CHECK((tilde.kernel(origin()).probs() - m.site_kernel(0.1, 1).probs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((tilde.kernel(make_site({0, 1})).probs() - m.p_gamma(0.1).probs()).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
