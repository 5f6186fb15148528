#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/enumeration.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"
#include "gibbslab/schedule.hpp"
#include "gibbslab/test_functional.hpp"
#include "gibbslab/variational.hpp"

namespace gibbslab::harness {

/// -(1/beta) log E[e^{-beta f(L_n)}] under the Gibbs law, by enumeration.
double laplace_exact(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f, std::size_t n,
                     double beta, const enumeration::Options& opts = {});

/// log Z_n by enumeration.
double log_partition_function(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                              const enumeration::Options& opts = {});

/// inf{f + R} - inf R on the grid, R = I (entropic) or J (energy only).
struct RateReference {
  std::string rate;  // "I" or "J"
  double value = 0.0;
  double inf_tilted = 0.0;
  double inf_rate = 0.0;
  MinimizationResult tilted;
  MinimizationResult untilted;
};

RateReference rate_reference(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                             bool entropic, const GridSpec& grid, const VariationalOptions& opts = {});

struct ExperimentRow {
  std::size_t n = 0;
  double beta = 0.0;
  double exact = 0.0;
  double reference = 0.0;
  double gap = 0.0;
};

struct ExperimentReport {
  explicit ExperimentReport(ScheduleSpec s) : schedule(std::move(s)) {}

  ScheduleSpec schedule;
  std::string functional;
  std::string rate;  // rate functional referenced: "I" for beta = n, "J" otherwise
  double reference = 0.0;
  /// Reference of the other regime, and whether e^{-V} l is non-uniform on
  /// the grid; used to check that the two references are told apart.
  double alternate_reference = 0.0;
  bool nonuniform_gibbs_reference = false;
  std::vector<ExperimentRow> rows;
  nlohmann::json metadata;

  double gap_at(std::size_t n) const;
};

nlohmann::json to_json(const ExperimentReport& r);
/// Columns n,beta_n,exact,reference,gap with 17 significant digits.
void write_csv(std::ostream& os, const ExperimentReport& r);

struct LaplaceOptions {
  enumeration::Options enumeration;
  VariationalOptions variational;
  std::optional<GridSpec> grid;  // defaults to the atoms of l
};

/// Exact Laplace functional for each n of the schedule against the rate
/// reference: I for beta_n = n, J for faster schedules. The tilt of the
/// variational reference is f itself (linear or tanh_moment kinds).
ExperimentReport laplace_vs_rate(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                                 const ScheduleSpec& schedule, const LaplaceOptions& opts = {});

struct BiasReport {
  std::string mode;  // "exact" or "monte_carlo"
  double lhs = 0.0;  // E[W_offdiag(L_n)], X_i iid mu*
  double rhs = 0.0;  // ((n - 1) / n) W(mu*)
  double gap = 0.0;
  double standard_error = 0.0;  // MC mode
  std::size_t samples = 0;
  bool passed = false;  // gap <= 1e-12 (exact) or <= 3 standard errors (MC)
};

nlohmann::json to_json(const BiasReport& r);

/// Exact mode enumerates supp(mu*)^n with product weights; MC mode averages
/// over iid batches.
BiasReport bias_identity_check(const DiscreteMeasure& mu_star, const InteractionFn& w, std::size_t n,
                               std::uint64_t budget = enumeration::kDefaultBudget);
BiasReport bias_identity_mc(const DiscreteMeasure& mu_star, const InteractionFn& w, std::size_t n,
                            std::size_t samples, std::uint64_t seed);

enum class DistanceKind { kBoundedLipschitz, kPsi, kWasserstein };

struct ConcentrationOptions {
  DistanceKind distance = DistanceKind::kBoundedLipschitz;
  std::optional<WeightFunction> psi;  // d_psi
  double p = 2.0;                     // Wasserstein order
  std::size_t chains = 4;
  std::size_t samples_per_chain = 50;
  std::size_t burn_in = 2000;
  std::size_t thinning = 5;
  /// Single-site step sigma_n = sigma0 * n^(-sigma_power).
  double sigma0 = 1.0;
  double sigma_power = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ConcentrationRow {
  std::size_t n = 0;
  double beta = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double acceptance = 0.0;
  std::size_t samples = 0;
};

struct ConcentrationReport {
  std::string distance;
  std::vector<ConcentrationRow> rows;
  nlohmann::json metadata;
};

nlohmann::json to_json(const ConcentrationReport& r);
void write_csv(std::ostream& os, const ConcentrationReport& r);

/// For each n, distances from the empirical measures of MCMC samples to
/// `target`, summarized by batch median.
ConcentrationReport concentration_experiment(const PotentialPair& pair, const ReferenceMeasure& ell,
                                             const ScheduleSpec& schedule, const DiscreteMeasure& target,
                                             const ConcentrationOptions& opts = {});

double median(std::vector<double> values);

/// sup over the samples of tail_psi_mass at each radius.
std::vector<double> psi_tightness_probe(const std::vector<DiscreteMeasure>& samples, const WeightFunction& psi,
                                        const std::vector<double>& radii);

}  // namespace gibbslab::harness
