#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "gibbslab/measures.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {
DiscreteMeasure d1(std::vector<double> xs, std::vector<double> w) {
  std::vector<Point> a;
  for (double x : xs) a.push_back({x});
  return DiscreteMeasure(1, a, w);
}
}  // namespace

TEST_CASE("empirical measure merges duplicates") {
  const auto mu = empirical_measure(ParticleConfig(1, {{0.0}, {1.0}, {1.0}}));
  REQUIRE(mu.size() == 2);
  CHECK(mu.weight(0) == doctest::Approx(1.0 / 3.0));
  CHECK(mu.weight(1) == doctest::Approx(2.0 / 3.0));
  const auto one = empirical_measure(ParticleConfig(1, {{5.0}}));
  CHECK(one == DiscreteMeasure::dirac({5.0}));
  const auto four = empirical_measure(ParticleConfig(1, {{0.0}, {1.0}, {2.0}, {3.0}}));
  for (double w : four.weights()) CHECK(w == 0.25);
}

TEST_CASE("measure construction validates input") {
  CHECK_THROWS_AS(d1({0.0, 1.0}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(d1({0.0, 1.0}, {-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(2, {{0.0}}, {1.0}), InvalidArgument);
  const auto tiny = d1({0.0, 1.0}, {1.0 - 1e-17, 1e-17});
  CHECK(tiny.size() == 1);
}

TEST_CASE("d_bl examples") {
  const auto a = DiscreteMeasure::dirac({0.0});
  CHECK(d_bl(a, a) == 0.0);
  CHECK(d_bl(a, DiscreteMeasure::dirac({1.0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d_bl(a, DiscreteMeasure::dirac({3.0})) == doctest::Approx(1.0).epsilon(1e-12));
  // Within distance 1 the Lipschitz constraint binds: d_bl(delta_0, delta_t) = t.
  CHECK(d_bl(a, DiscreteMeasure::dirac({0.25})) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("d_bl linear program and network flow agree") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const auto mu = oracle::random_measure(rng, 4, 2, 1.5);
    const auto nu = oracle::random_measure(rng, 5, 2, 1.5);
    CHECK(d_bl(mu, nu, BlMethod::kLinearProgram) ==
          doctest::Approx(d_bl(mu, nu, BlMethod::kNetworkFlow)).epsilon(1e-9));
  }
}

TEST_CASE("d_psi examples") {
  const auto a = DiscreteMeasure::dirac({0.0});
  const auto b = DiscreteMeasure::dirac({1.0});
  const auto psi2 = WeightFunction::norm_power(2.0);
  CHECK(d_psi(a, a, psi2) == 0.0);
  CHECK(d_psi(a, b, psi2) == doctest::Approx(d_bl(a, b) + 1.0).epsilon(1e-12));
  CHECK(d_psi(a, a, WeightFunction::one_plus_norm()) == 0.0);
}

TEST_CASE("wasserstein examples") {
  CHECK(wasserstein_p(DiscreteMeasure::dirac({0.0}), DiscreteMeasure::dirac({1.0}), 2.0) == doctest::Approx(1.0));
  const auto u01 = d1({0.0, 1.0}, {0.5, 0.5});
  const auto u02 = d1({0.0, 2.0}, {0.5, 0.5});
  for (auto m : {TransportMethod::kQuantile, TransportMethod::kLinearProgram, TransportMethod::kNetworkFlow}) {
    CHECK(wasserstein_p(u01, u02, 1.0, m) == doctest::Approx(0.5).epsilon(1e-12));
  }
  std::mt19937_64 rng(3);
  const auto mu = oracle::random_measure(rng, 5, 1);
  CHECK(wasserstein_p(mu, mu, 2.0) == 0.0);
  CHECK_THROWS_AS(wasserstein_p(mu, mu, 0.5), InvalidArgument);
  CHECK_THROWS_AS(wasserstein_p(mu, DiscreteMeasure::dirac({0.0, 0.0}), 1.0), InvalidArgument);
}

TEST_CASE("wasserstein routes match the permutation oracle on uniform measures") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point> a(4, Point(2)), b(4, Point(2));
    for (auto& p : a) p = {u(rng), u(rng)};
    for (auto& p : b) p = {u(rng), u(rng)};
    const double want = oracle::transport_by_permutations(a, b, 1.5);
    const auto mu = DiscreteMeasure::uniform(2, a), nu = DiscreteMeasure::uniform(2, b);
    CHECK(wasserstein_p(mu, nu, 1.5, TransportMethod::kLinearProgram) == doctest::Approx(want).epsilon(1e-9));
    CHECK(wasserstein_p(mu, nu, 1.5, TransportMethod::kNetworkFlow) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("psi integral and tail mass examples") {
  const auto psi2 = WeightFunction::norm_power(2.0);
  const auto psi1 = WeightFunction::norm_power(1.0);
  CHECK(psi_integral(DiscreteMeasure::dirac({0.0}), psi2) == 0.0);
  CHECK(psi_integral(d1({-1.0, 1.0}, {0.5, 0.5}), psi2) == doctest::Approx(1.0));
  CHECK(psi_integral(d1({0.0, 1.0, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}), psi1) == doctest::Approx(1.0));
  const auto u03 = d1({0.0, 3.0}, {0.5, 0.5});
  CHECK(tail_psi_mass(u03, psi1, 1.0) == doctest::Approx(1.5));
  CHECK(tail_psi_mass(u03, psi1, 10.0) == 0.0);
  const auto nz = d1({1.0, 2.0}, {0.5, 0.5});
  CHECK(tail_psi_mass(nz, psi1, 0.0) == doctest::Approx(psi_integral(nz, psi1)));
}

TEST_CASE("escaping mass: d_psi sees what d_bl misses") {
  const auto psi1 = WeightFunction::norm_power(1.0);
  const auto psi_half = WeightFunction::norm_power(0.5);
  const auto limit = DiscreteMeasure::dirac({0.0});
  double prev_half = kInf;
  for (double k : {10.0, 100.0, 1000.0}) {
    const auto mu = d1({0.0, k}, {1.0 - 1.0 / k, 1.0 / k});
    CHECK(d_bl(mu, limit) <= 2.0 / k + 1e-12);
    CHECK(d_psi(mu, limit, psi1) >= 1.0 - 1e-12);
    const double h = d_psi(mu, limit, psi_half);
    CHECK(h < prev_half);
    prev_half = h;
  }
  CHECK(prev_half < 0.05);
}

TEST_CASE("json round trip and csv export") {
  std::mt19937_64 rng(9);
  const auto mu = oracle::random_measure(rng, 3, 2);
  CHECK(measure_from_json(to_json(mu)) == mu);
  std::ostringstream os;
  write_csv(os, mu);
  CHECK(os.str().rfind("x_1,x_2,w\n", 0) == 0);
}
