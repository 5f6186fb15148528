#pragma once

// Independent brute-force routes used as test oracles. None of these call
// the library's enumeration, transport or minimization code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "gibbslab/core.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"

namespace oracle {

using gibbslab::kInf;
using gibbslab::Point;

/// Visits every occupation vector k with sum n over m types.
inline void for_each_composition(std::size_t m, std::size_t n,
                                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> k(m, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == m) {
      k[i] = left;
      fn(k);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      k[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, n);
}

inline double log_multinomial(const std::vector<std::size_t>& k) {
  std::size_t n = 0;
  double s = 0.0;
  for (std::size_t c : k) {
    n += c;
    s -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  return s + std::lgamma(static_cast<double>(n) + 1.0);
}

/// H_n as a function of the occupation vector on the atoms.
inline double hamiltonian_by_counts(const std::vector<std::size_t>& k, const std::vector<double>& v,
                                    const std::vector<std::vector<double>>& w) {
  const std::size_t m = k.size();
  double n = 0.0;
  for (std::size_t c : k) n += static_cast<double>(c);
  double conf = 0.0, pair = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (k[i] == 0) continue;
    if (v[i] == kInf) return kInf;
    conf += static_cast<double>(k[i]) * v[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (k[j] == 0) continue;
      const double pairs = i == j ? static_cast<double>(k[i]) * (static_cast<double>(k[i]) - 1.0)
                                  : static_cast<double>(k[i]) * static_cast<double>(k[j]);
      if (pairs == 0.0) continue;
      if (w[i][j] == kInf) return kInf;
      pair += pairs * w[i][j];
    }
  }
  return conf / n + pair / (2.0 * n * n);
}

/// -(1/beta) log E[e^{-beta f(L_n)}] via a sum over occupation vectors with
/// multinomial weights. f is a function of the weight vector k/n.
inline double laplace_by_types(const gibbslab::PotentialPair& pair, const gibbslab::ReferenceMeasure& ell,
                               const std::function<double(const std::vector<double>&)>& f, std::size_t n,
                               double beta) {
  const auto& atoms = ell.atoms();
  const std::size_t m = atoms.size();
  std::vector<double> v(m);
  std::vector<std::vector<double>> w(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = pair.confinement(atoms[i]);
    for (std::size_t j = 0; j < m; ++j) w[i][j] = pair.interaction(atoms[i], atoms[j]);
  }
  double max_a = -kInf, max_b = -kInf;
  std::vector<double> la, lb;
  for_each_composition(m, n, [&](const std::vector<std::size_t>& k) {
    const double h = hamiltonian_by_counts(k, v, w);
    if (h == kInf) return;
    double lw = log_multinomial(k);
    for (std::size_t i = 0; i < m; ++i) lw += static_cast<double>(k[i]) * std::log(ell.weights()[i]);
    std::vector<double> frac(m);
    for (std::size_t i = 0; i < m; ++i) frac[i] = static_cast<double>(k[i]) / static_cast<double>(n);
    const double a = lw - beta * h;
    const double b = a - beta * f(frac);
    la.push_back(a);
    lb.push_back(b);
    max_a = std::max(max_a, a);
    max_b = std::max(max_b, b);
  });
  double sa = 0.0, sb = 0.0;
  for (double x : la) sa += std::exp(x - max_a);
  for (double x : lb) sb += std::exp(x - max_b);
  const double log_z = max_a + std::log(sa);
  const double log_zf = max_b + std::log(sb);
  return -(log_zf - log_z) / beta;
}

/// Raw transport cost between two uniform measures on the same number of
/// atoms: minimum over all permutations (Birkhoff vertices).
inline double transport_by_permutations(const std::vector<Point>& a, const std::vector<Point>& b, double p) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::pow(gibbslab::distance(a[i], b[perm[i]]), p);
    best = std::min(best, c / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Direct pair sum for H_n over ordered index pairs i != j.
inline double hamiltonian_direct(const std::vector<Point>& x, const gibbslab::PotentialPair& pair) {
  const double n = static_cast<double>(x.size());
  double conf = 0.0, inter = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    conf += pair.confinement(x[i]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i != j) inter += pair.interaction(x[i], x[j]);
    }
  }
  return conf / n + inter / (2.0 * n * n);
}

/// Random probability vector with `m` entries, each at least `floor`.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t m, double floor = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(m);
  double s = 0.0;
  for (auto& x : w) {
    x = floor + u(rng);
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

inline gibbslab::DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t m, std::size_t dim,
                                                double spread = 2.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Point> atoms(m, Point(dim));
  for (auto& a : atoms) {
    for (auto& c : a) c = u(rng);
  }
  return gibbslab::DiscreteMeasure(dim, atoms, random_weights(rng, m, 0.05));
}

}  // namespace oracle
