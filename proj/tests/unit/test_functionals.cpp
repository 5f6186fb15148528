#include <doctest.h>

#include <json.hpp>
#include <random>

#include "gibbslab/functionals.hpp"
#include "oracles.hpp"

using namespace gibbslab;
using namespace gibbslab::functionals;

namespace {
PotentialPair make(std::size_t d, ConfinementFn v, InteractionFn w) {
  PotentialPair p;
  p.dim = d;
  p.confinement_fn = std::move(v);
  p.interaction_fn = std::move(w);
  return p;
}
DiscreteMeasure u01() { return DiscreteMeasure::uniform(1, {{0.0}, {1.0}}); }
}  // namespace

TEST_CASE("hamiltonian examples") {
  const auto p = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  CHECK(hamiltonian(ParticleConfig(1, {{0.0}, {1.0}}), p) == doctest::Approx(0.75));
  CHECK(hamiltonian(ParticleConfig(1, {{1.5}}), p) == doctest::Approx(2.25));
  const auto c2 = make(2, potentials::zero_confinement(), potentials::coulomb_kernel(2));
  CHECK(hamiltonian(ParticleConfig(2, {{0.0, 1.0}, {0.0, 1.0}}), c2) == kInf);
}

TEST_CASE("hamiltonian matches the direct double loop, symmetric or not") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  auto asym = [](std::span<const double> x, std::span<const double> y) { return std::exp(x[0]) * y[0] * y[0]; };
  auto p = make(1, potentials::power_confinement(2.0), asym);
  p.symmetric = false;
  const auto q = make(1, potentials::power_confinement(3.0), potentials::squared_distance());
  for (int t = 0; t < 50; ++t) {
    std::vector<Point> x(7, Point(1));
    for (auto& a : x) a[0] = g(rng);
    const ParticleConfig c(1, x);
    CHECK(hamiltonian(c, p) == doctest::Approx(oracle::hamiltonian_direct(x, p)).epsilon(1e-13));
    CHECK(hamiltonian(c, q) == doctest::Approx(oracle::hamiltonian_direct(x, q)).epsilon(1e-13));
  }
}

TEST_CASE("interaction energy examples") {
  const auto w = potentials::squared_distance();
  CHECK(interaction_energy(u01(), w) == doctest::Approx(0.25));
  CHECK(interaction_energy_offdiag(u01(), w) == doctest::Approx(0.25));
  auto diag = [](std::span<const double> x, std::span<const double>) { return 3.0 + x[0]; };
  CHECK(interaction_energy(DiscreteMeasure::dirac({1.0}), diag) == doctest::Approx(2.0));
  CHECK(interaction_energy_offdiag(DiscreteMeasure::dirac({1.0}), diag) == 0.0);
  CHECK(interaction_energy(u01(), potentials::zero_interaction()) == 0.0);
  const auto c2 = potentials::coulomb_kernel(2);
  const auto mu = DiscreteMeasure::uniform(2, {{0.0, 0.0}, {0.5, 0.0}});
  CHECK(interaction_energy(mu, c2) == kInf);
  CHECK(std::isfinite(interaction_energy_offdiag(mu, c2)));
}

TEST_CASE("truncated interaction examples") {
  const auto w = potentials::squared_distance();
  const auto t = truncated_interaction(u01(), w, 10.0);
  CHECK(t.full == doctest::Approx(interaction_energy(u01(), w)));
  const auto z = truncated_interaction(u01(), w, 0.0);
  CHECK(z.full == 0.0);
  CHECK(z.offdiag == 0.0);
  const auto c2 = potentials::coulomb_kernel(2);
  const auto ln = empirical_measure(ParticleConfig(2, {{0.0, 0.0}, {0.3, 0.0}, {0.0, 0.7}, {1.0, 1.0}}));
  const auto tm = truncated_interaction(ln, c2, 5.0);
  CHECK(tm.full - tm.offdiag == doctest::Approx(5.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("relative entropy examples") {
  CHECK(relative_entropy(u01(), u01()) == 0.0);
  CHECK(relative_entropy(DiscreteMeasure::dirac({0.0}), u01()) == doctest::Approx(std::log(2.0)));
  CHECK(relative_entropy(DiscreteMeasure::dirac({5.0}), u01()) == kInf);
}

TEST_CASE("rate I examples") {
  const auto ell = ReferenceMeasure::finite(1, {{0.0}, {1.0}}, {1.0, 1.0});
  const auto sanov = make(1, potentials::power_confinement(2.0), potentials::zero_interaction());
  const auto g = gibbs_reference(sanov, ell);
  const auto v0 = rate_I(g.measure, sanov, ell);
  CHECK(v0.value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(v0.warnings.empty());  // e^{-V} l has mass 1 + e^{-1}
  CHECK_FALSE(rate_I(DiscreteMeasure::dirac({3.0}), sanov, ell).finite);

  const auto p = make(1, potentials::constant_confinement(std::log(2.0)), potentials::squared_distance());
  const auto v = rate_I(u01(), p, ell);
  CHECK(v.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(v.breakdown.at("entropy") == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.breakdown.at("interaction") == doctest::Approx(0.25));
  CHECK(v.warnings.empty());
  const auto j = to_json(v);
  CHECK(j["breakdown"]["interaction"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("rate J examples") {
  auto diag = [](std::span<const double> x, std::span<const double>) { return 3.0 + x[0]; };
  const auto p = make(1, potentials::power_confinement(2.0), diag);
  CHECK(rate_J(DiscreteMeasure::dirac({2.0}), p).value == doctest::Approx(4.0 + 2.5));
  const auto z = make(1, potentials::zero_confinement(), potentials::zero_interaction());
  CHECK(rate_J(u01(), z).value == 0.0);
  const auto q = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto v = rate_J(u01(), q);
  CHECK(v.value == doctest::Approx(0.75));
  CHECK(v.breakdown.at("confinement") == doctest::Approx(0.5));
  CHECK(v.breakdown.at("quadratic_form") == doctest::Approx(0.75));
}

TEST_CASE("J_n offdiag special cases") {
  const auto q = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto mu = DiscreteMeasure(1, {{0.0}, {1.0}, {2.0}}, {0.2, 0.3, 0.5});
  CHECK(rate_J_n_offdiag(mu, q, 5, 5.0).value == doctest::Approx(interaction_energy_offdiag(mu, q.interaction_fn)));
  CHECK(rate_J_n_offdiag(mu, q, 5, 1e300).value ==
        doctest::Approx(confinement_energy(mu, q) + interaction_energy_offdiag(mu, q.interaction_fn)));
}

TEST_CASE("coupled energy on product measures") {
  const auto q = make(1, potentials::power_confinement(2.0), potentials::squared_distance());
  const auto mu = DiscreteMeasure(1, {{-1.0}, {0.5}, {2.0}}, {0.2, 0.3, 0.5});
  const auto zeta = product_measure(mu, mu);
  const auto c = coupled_energy(zeta, q);
  CHECK(c.frak_w == doctest::Approx(interaction_energy(mu, q.interaction_fn)).epsilon(1e-13));
  CHECK(c.frak_j == doctest::Approx(rate_J(mu, q).value).epsilon(1e-13));
  const auto z = make(1, potentials::zero_confinement(), potentials::zero_interaction());
  CHECK(coupled_energy(zeta, z).frak_w == 0.0);
}

TEST_CASE("star gap") {
  CHECK(star_gap({FunctionalValue::from(2.0)}, 0) == 0.0);
  CHECK(star_gap({FunctionalValue::from(1.0), FunctionalValue::from(3.0)}, 1) == 2.0);
  CHECK(star_gap({FunctionalValue::from(1.0), FunctionalValue::from(3.0)}, 0) == 0.0);
  CHECK_THROWS(star_gap({FunctionalValue::from(kInf)}, 0));
}

TEST_CASE("property: decomposition identity on random configurations") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> nn(1, 12);
  std::uniform_real_distribution<double> u(1.0, 50.0);
  const auto q = make(2, potentials::power_confinement(2.0), potentials::coulomb_kernel(2));
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = static_cast<std::size_t>(nn(rng));
    std::vector<Point> x(n, Point(2));
    for (auto& a : x) a = {g(rng), g(rng)};
    const double beta = static_cast<double>(n) * u(rng);
    const ParticleConfig c(2, x);
    double sv = 0.0;
    for (const auto& a : x) sv += q.confinement(a);
    const double lhs = rate_J_n_offdiag(empirical_measure(c), q, n, beta).value;
    CHECK(std::abs(lhs - (hamiltonian(c, q) - sv / beta)) <= 1e-12);
  }
}

TEST_CASE("property: truncation inequality and monotonicity in M") {
  std::mt19937_64 rng(22);
  const auto w = potentials::coulomb_kernel(2);
  for (int t = 0; t < 100; ++t) {
    const auto mu = oracle::random_measure(rng, 6, 2, 1.0);
    double prev = -kInf;
    for (double m : {0.1, 1.0, 3.0, 10.0}) {
      const auto tr = truncated_interaction(mu, w, m);
      CHECK(tr.full <= tr.offdiag + 0.5 * m * diagonal_mass(mu) + 1e-12);
      CHECK(tr.full >= prev);
      prev = tr.full;
    }
  }
}

TEST_CASE("property: offdiag below full when the diagonal is non-negative") {
  std::mt19937_64 rng(23);
  const auto w = potentials::squared_distance();
  const auto c3 = potentials::coulomb_kernel(3);
  for (int t = 0; t < 100; ++t) {
    const auto mu = oracle::random_measure(rng, 5, 3);
    CHECK(interaction_energy_offdiag(mu, w) <= interaction_energy(mu, w) + 1e-15);
    CHECK(interaction_energy_offdiag(mu, c3) <= interaction_energy(mu, c3));
  }
}

TEST_CASE("property: joint convexity of relative entropy") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> atoms{{0.0}, {1.0}, {2.0}, {3.0}};
  for (int trial = 0; trial < 200; ++trial) {
    const auto a1 = oracle::random_weights(rng, 4), a2 = oracle::random_weights(rng, 4);
    const auto b1 = oracle::random_weights(rng, 4, 0.1), b2 = oracle::random_weights(rng, 4, 0.1);
    const double t = u(rng);
    std::vector<double> am(4), bm(4);
    for (int i = 0; i < 4; ++i) {
      am[i] = t * a1[i] + (1 - t) * a2[i];
      bm[i] = t * b1[i] + (1 - t) * b2[i];
    }
    auto m = [&](const std::vector<double>& w) { return DiscreteMeasure(1, atoms, w); };
    CHECK(relative_entropy(m(am), m(bm)) <=
          t * relative_entropy(m(a1), m(b1)) + (1 - t) * relative_entropy(m(a2), m(b2)) + 1e-12);
  }
}
