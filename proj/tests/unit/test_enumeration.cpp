#include <doctest.h>

#include <cmath>
#include <random>

#include "gibbslab/enumeration.hpp"
#include "gibbslab/functionals.hpp"
#include "oracles.hpp"

using namespace gibbslab;
using namespace gibbslab::enumeration;

namespace {
PotentialPair make(std::size_t d, ConfinementFn v, InteractionFn w) {
  PotentialPair p;
  p.dim = d;
  p.confinement_fn = std::move(v);
  p.interaction_fn = std::move(w);
  return p;
}
}  // namespace

TEST_CASE("config count and budget") {
  CHECK(config_count(3, 4, 100) == 81);
  CHECK(config_count(1, 50, 1) == 1);
  CHECK_THROWS_AS(config_count(10, 8, 1000), BudgetExceeded);
  CHECK_THROWS_AS(config_count(2, 70, ~std::uint64_t{0}), BudgetExceeded);
}

TEST_CASE("log partition of the free gas") {
  const auto z = make(1, potentials::zero_confinement(), potentials::zero_interaction());
  const auto ell = ReferenceMeasure::finite(1, {{0.0}, {1.0}}, {1.0, 2.0});
  CHECK(log_partition(z, ell, 3, 3.0) == doctest::Approx(3.0 * std::log(3.0)));
}

TEST_CASE("log partition is -inf when every configuration is forbidden") {
  const auto c = make(1, potentials::zero_confinement(), potentials::log_kernel());
  const auto ell = ReferenceMeasure::finite(1, {{0.0}, {1.0}}, {1.0, 1.0});
  CHECK(std::isfinite(log_partition(c, ell, 2, 2.0)));
  CHECK(log_partition(c, ell, 3, 3.0) == -kInf);
  CHECK_THROWS_AS(laplace_terms(c, ell, TestFunctional::zero(), 3, 3.0), NumericalError);
}

TEST_CASE("two-particle log partition by hand") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto ell = ReferenceMeasure::finite(1, {{0.0}, {1.0}}, {1.0, 1.0});
  // H(0,0) = 0, H(1,1) = 1, H(0,1) = H(1,0) = 1/2 + 1/4.
  const double beta = 2.0;
  const double z = 1.0 + std::exp(-beta) + 2.0 * std::exp(-beta * 0.75);
  CHECK(log_partition(p, ell, 2, beta) == doctest::Approx(std::log(z)).epsilon(1e-14));
}

TEST_CASE("config law digits and probabilities") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto ell = ReferenceMeasure::finite(1, {{0.0}, {1.0}, {2.0}}, {1.0, 0.5, 2.0});
  const auto law = gibbs_law(p, ell, 3, 1.5);
  CHECK(law.prob.size() == 27);
  CHECK(law.digits(5) == std::vector<std::size_t>{0, 1, 2});
  CHECK(law.config(5).points[2][0] == 2.0);
  double total = 0.0, zsum = 0.0;
  std::vector<double> raw(27);
  for (std::uint64_t k = 0; k < 27; ++k) {
    total += law.prob[k];
    CHECK(law.index_of(law.config(k)) == k);
    const auto d = law.digits(k);
    double lw = 1.0;
    for (auto i : d) lw *= ell.weights()[i];
    raw[k] = lw * std::exp(-1.5 * oracle::hamiltonian_direct(law.config(k).points, p));
    zsum += raw[k];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  for (std::uint64_t k = 0; k < 27; ++k) CHECK(law.prob[k] == doctest::Approx(raw[k] / zsum).epsilon(1e-12));
}

TEST_CASE("property: laplace terms match the occupation-vector oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<int> mm(2, 4), nn(1, 6);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = static_cast<std::size_t>(mm(rng));
    const std::size_t n = static_cast<std::size_t>(nn(rng));
    std::vector<Point> atoms(m, Point(1));
    for (auto& a : atoms) a[0] = u(rng);
    const auto ell = ReferenceMeasure::finite(1, atoms, oracle::random_weights(rng, m, 0.2));
    const auto p = make(1, potentials::power_confinement(2.0), potentials::coulomb_kernel(1));
    const double c = u(rng);
    const auto g = [](std::span<const double> x) { return std::cos(2.0 * x[0]); };
    const auto f = TestFunctional::tanh_moment(c, g);
    const double beta = static_cast<double>(n) * (1.0 + 2.0 * std::abs(u(rng)));
    const double lib = laplace_terms(p, ell, f, n, beta).value();
    const double orc = oracle::laplace_by_types(
        p, ell,
        [&](const std::vector<double>& frac) {
          double s = 0.0;
          for (std::size_t i = 0; i < m; ++i) s += frac[i] * g(ell.atoms()[i]);
          return c * std::tanh(s);
        },
        n, beta);
    CHECK(lib == doctest::Approx(orc).epsilon(1e-11));
  }
}

TEST_CASE("property: threads do not change the result") {
  std::mt19937_64 rng(42);
  const auto ell = ReferenceMeasure::finite(1, {{-1.0}, {0.0}, {0.7}, {1.3}}, oracle::random_weights(rng, 4, 0.1));
  const auto p = make(1, potentials::power_confinement(2.0), potentials::coulomb_kernel(1));
  const auto f = TestFunctional::linear([](std::span<const double> x) { return x[0]; });
  const auto a = laplace_terms(p, ell, f, 7, 14.0, {kDefaultBudget, 1});
  const auto b = laplace_terms(p, ell, f, 7, 14.0, {kDefaultBudget, 3});
  CHECK(a.log_z == doctest::Approx(b.log_z).epsilon(1e-13));
  CHECK(a.value() == doctest::Approx(b.value()).epsilon(1e-12));
}

TEST_CASE("property: zero functional has zero Laplace value and shifts pass through") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto ell = ReferenceMeasure::finite(1, {{0.0}, {0.5}, {1.5}}, oracle::random_weights(rng, 3, 0.1));
    const auto p = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
    CHECK(std::abs(laplace_terms(p, ell, TestFunctional::zero(), 4, 4.0).value()) <= 1e-13);
    const auto f = TestFunctional::tanh_moment(1.0, [](std::span<const double> x) { return x[0]; });
    const double a = laplace_terms(p, ell, f, 4, 6.0).value();
    const double b = laplace_terms(p, ell, f.shifted(0.75), 4, 6.0).value();
    CHECK(b - a == doctest::Approx(0.75).epsilon(1e-12));
  }
}
