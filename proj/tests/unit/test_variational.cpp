#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "gibbslab/functionals.hpp"
#include "gibbslab/variational.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {
PotentialPair make(std::size_t d, ConfinementFn v, InteractionFn w) {
  PotentialPair p;
  p.dim = d;
  p.confinement_fn = std::move(v);
  p.interaction_fn = std::move(w);
  return p;
}

InteractionFn gaussian_kernel(double a) {
  return [a](std::span<const double> x, std::span<const double> y) {
    const double r = distance(x, y);
    return a * std::exp(-r * r);
  };
}
}  // namespace

TEST_CASE("grid construction") {
  const auto g = GridSpec::box({-1.0, 0.0}, {1.0, 0.5}, 0.5);
  CHECK(g.size() == 5 * 2);
  CHECK(g.nodes[1] == Point{-1.0, 0.5});
  CHECK(g.spacing() == 0.5);
  CHECK_THROWS_AS(GridSpec::box({0.0}, {1.0}, 1e-6, 1000), BudgetExceeded);
  CHECK_THROWS_AS(GridSpec::box({0.0}, {1.0}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::explicit_nodes(1, {{0.0}, {0.0}}), InvalidArgument);
  CHECK(GridSpec::explicit_nodes(1, {{0.0}, {0.3}, {1.0}}).spacing() == doctest::Approx(0.3));
  CHECK(to_json(g)["dim"] == 2);
}

TEST_CASE("Sanov case: minimizer is the normalized Gibbs reference") {
  const auto ell = ReferenceMeasure::finite(1, {{-1.0}, {0.0}, {0.5}, {2.0}}, {1.0, 3.0, 0.5, 2.0});
  const auto p = make(1, potentials::power_confinement(2.0), potentials::zero_interaction());
  const auto r = minimize_I(p, ell, GridSpec::from_reference(ell));
  CHECK(std::abs(r.value) <= 1e-8);
  const auto g = functionals::gibbs_reference(p, ell).measure;
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.weights[i] == doctest::Approx(g.weight(i)).epsilon(1e-5));
  CHECK_FALSE(r.local);
}

TEST_CASE("linear tilt of the entropy has a closed form") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t) {
    const auto ell = ReferenceMeasure::finite(1, {{-1.0}, {0.0}, {1.0}}, oracle::random_weights(rng, 3, 0.1));
    const auto p = make(1, potentials::zero_confinement(), potentials::zero_interaction());
    VariationalOptions opts;
    opts.tilt = TestFunctional::linear([](std::span<const double> x) { return 2.0 * x[0]; });
    const auto r = minimize_I(p, ell, GridSpec::from_reference(ell), opts);
    double s = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      s += ell.weights()[i] * std::exp(-2.0 * ell.atoms()[i][0]);
      tot += ell.weights()[i];
    }
    CHECK(r.value == doctest::Approx(-std::log(s / tot)).epsilon(1e-7));
  }
}

TEST_CASE("J without interaction concentrates on the minimum of V") {
  const auto p = make(1, [](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3); },
                      potentials::zero_interaction());
  const auto r = minimize_J(p, GridSpec::box({-1.0}, {1.0}, 0.1));
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.minimizer.size() == 1);
  CHECK(r.minimizer.atom(0)[0] == doctest::Approx(0.3));
}

TEST_CASE("J with squared distance is minimized by a point mass at 0") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto r = minimize_J(p, GridSpec::box({-1.0}, {1.0}, 0.25));
  CHECK(std::abs(r.value) <= 1e-8);
}

TEST_CASE("hard wall nodes are infeasible") {
  const auto p = make(1, potentials::hard_wall(Box{{0.0}, {1.0}}), potentials::zero_interaction());
  const auto r = minimize_J(p, GridSpec::box({-1.0}, {1.0}, 0.5));
  CHECK(r.nodes.size() == 3);
  const auto none = make(1, potentials::hard_wall(Box{{5.0}, {6.0}}), potentials::zero_interaction());
  CHECK_THROWS_AS(minimize_J(none, GridSpec::box({-1.0}, {1.0}, 0.5)), InvalidArgument);
}

TEST_CASE("diagonal surrogate") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::log_kernel());
  const auto s = diagonal_surrogate(p, {{0.0}, {0.1}}, 0.1);
  CHECK(s.applied);
  CHECK(s.diagonal[0] == doctest::Approx(-std::log(0.05)));
  const auto q = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto t = diagonal_surrogate(q, {{0.0}, {0.1}}, 0.1);
  CHECK_FALSE(t.applied);
  CHECK(t.diagonal[1] == 0.0);
}

TEST_CASE("conditional positive semidefiniteness") {
  const std::vector<Point> nodes{{-1.0}, {-0.2}, {0.4}, {1.0}};
  const auto lg = make(1, potentials::zero_confinement(), potentials::log_kernel());
  CHECK(conditional_min_eigenvalue(lg, nodes, diagonal_surrogate(lg, nodes, 0.6)) > 0.0);
  const auto cb = make(1, potentials::zero_confinement(), potentials::coulomb_kernel(1));
  CHECK(conditional_min_eigenvalue(cb, nodes, diagonal_surrogate(cb, nodes, 0.6)) >= -1e-12);
  const auto sq = make(1, potentials::zero_confinement(), potentials::squared_distance());
  CHECK(conditional_min_eigenvalue(sq, nodes, diagonal_surrogate(sq, nodes, 0.6)) < -1e-3);
}

TEST_CASE("simplex scan oracle") {
  const std::vector<Point> nodes{{0.0}, {1.0}};
  const auto r = simplex_scan_oracle(1, nodes, [](std::span<const double> w) { return (w[0] - 0.3) * (w[0] - 0.3); },
                                     0.1);
  CHECK(r.weights[0] == doctest::Approx(0.3));
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-15));
  // Ties resolve to the lexicographically first lattice point.
  const auto t = simplex_scan_oracle(1, nodes, [](std::span<const double>) { return 1.0; }, 0.5);
  CHECK(t.weights[0] == 0.0);
  CHECK_THROWS_AS(simplex_scan_oracle(1, nodes, [](std::span<const double>) { return 0.0; }, 0.3), InvalidArgument);
  CHECK_THROWS_AS(simplex_scan_oracle(1, {{0.0}, {1.0}, {2.0}, {3.0}}, [](std::span<const double>) { return 0.0; },
                                      0.001, 1000),
                  BudgetExceeded);
}

TEST_CASE("property: minimize_J agrees with the lattice oracle on random 3-node instances") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 8; ++t) {
    std::vector<Point> nodes{{u(rng)}, {u(rng) + 2.5}, {u(rng) - 2.5}};
    const auto p = make(1, potentials::power_confinement(2.0), gaussian_kernel(1.0 + u(rng)));
    const auto grid = GridSpec::explicit_nodes(1, nodes);
    const auto r = minimize_J(p, grid);
    const auto o = simplex_scan_oracle(1, nodes, rate_J_objective(p, nodes), 0.002);
    CHECK(r.value <= o.value + 1e-9);
    CHECK(r.value >= o.value - 1e-4);
  }
}

TEST_CASE("property: minimize_I agrees with the lattice oracle on random 3-node instances") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 8; ++t) {
    const auto ell = ReferenceMeasure::finite(1, {{u(rng)}, {u(rng)}, {u(rng) + 3.0}},
                                              oracle::random_weights(rng, 3, 0.1));
    const auto p = make(1, potentials::power_confinement(2.0), gaussian_kernel(2.0));
    VariationalOptions opts;
    opts.tilt = TestFunctional::tanh_moment(1.0, [](std::span<const double> x) { return x[0]; });
    const auto r = minimize_I(p, ell, GridSpec::from_reference(ell), opts);
    const auto o = simplex_scan_oracle(1, ell.atoms(), rate_I_objective(p, ell, ell.atoms(), opts.tilt), 0.002);
    CHECK(r.value <= o.value + 1e-9);
    CHECK(r.value >= o.value - 1e-3);
  }
}

TEST_CASE("log-gas minimizer is supported on [-1, 1]") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::log_kernel());
  VariationalOptions opts;
  opts.tol = 1e-9;
  const auto r = minimize_J(p, GridSpec::box({-1.5}, {1.5}, 0.02), opts);
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    if (r.weights[i] >= 1e-6) {
      lo = std::min(lo, r.nodes[i][0]);
      hi = std::max(hi, r.nodes[i][0]);
    }
  }
  CHECK(lo == doctest::Approx(-1.0).epsilon(0.03));
  CHECK(hi == doctest::Approx(1.0).epsilon(0.03));
  CHECK(r.value == doctest::Approx(0.375 + 0.5 * std::log(2.0)).epsilon(0.01));
  CHECK_FALSE(r.local);
  CHECK(r.surrogate.applied);
  CHECK(to_json(r)["method"].is_string());
}
