#pragma once

#include <cstdint>
#include <vector>

#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"
#include "gibbslab/test_functional.hpp"

namespace gibbslab::enumeration {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct Options {
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

/// m^n, or throws BudgetExceeded when it exceeds `budget`.
std::uint64_t config_count(std::size_t m, std::size_t n, std::uint64_t budget);

/// log Z_n = log sum over the m^n configurations of e^{-beta H_n} prod l(x_i).
/// -inf when every configuration has infinite energy.
double log_partition(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                     const Options& opts = {});

struct LaplaceTerms {
  double log_z = 0.0;    // f = 0
  double log_z_f = 0.0;  // weights additionally multiplied by e^{-beta f(L_n)}
  double beta = 1.0;
  /// -(1/beta) (log_z_f - log_z)
  double value() const { return -(log_z_f - log_z) / beta; }
};

/// Both partition sums from one pass over the configurations. f(L_n) is
/// evaluated once per occupation-count vector. Throws NumericalError when
/// Z_n = 0.
LaplaceTerms laplace_terms(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                           std::size_t n, double beta, const Options& opts = {});

/// The exact Gibbs law on the m^n configurations of a finite reference.
/// Configuration index k encodes atom indices in base m, most significant
/// digit first (lexicographic order).
struct ConfigLaw {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t dim = 1;
  std::vector<Point> atoms;
  std::vector<double> prob;

  std::vector<std::size_t> digits(std::uint64_t index) const;
  ParticleConfig config(std::uint64_t index) const;
  /// Inverse of `digits` for configurations whose points are reference atoms.
  std::uint64_t index_of(const ParticleConfig& config) const;
};

ConfigLaw gibbs_law(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                    const Options& opts = {});

}  // namespace gibbslab::enumeration
