#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "gibbslab/enumeration.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/random.hpp"
#include "gibbslab/reference.hpp"

namespace gibbslab {

struct SamplerConfig {
  enum class Proposal {
    kSingleSite,  // move one particle per step; a sweep is n steps
    kRandomWalk,  // move every particle at once; a sweep is one step
  };

  std::size_t n = 1;
  double beta_n = 1.0;
  Proposal proposal = Proposal::kSingleSite;
  /// Gaussian step for density references. Finite references propose a
  /// uniformly drawn atom instead and ignore sigma.
  double sigma = 0.1;
  std::size_t burn_in = 100;  // sweeps
  std::size_t thinning = 1;   // sweeps between kept samples (0 acts as 1)
  std::uint64_t seed = 0;
  std::optional<ParticleConfig> init;
};

nlohmann::json to_json(const SamplerConfig& cfg);

struct ChainDiagnostics {
  std::vector<double> acceptance;  // per sweep
  std::vector<double> energy;      // H_n per kept sample
  std::vector<std::size_t> kept_sweeps;
  double acceptance_rate = 0.0;  // over all post-burn-in steps
  double energy_ess = 0.0;
  std::size_t init_attempts = 1;
};

/// Effective sample size with Geyer's initial positive sequence estimator.
double effective_sample_size(const std::vector<double>& trace);

struct ChainResult {
  std::vector<ParticleConfig> samples;
  ChainDiagnostics diagnostics;
};

/// Metropolis-Hastings chain targeting exp(-beta_n H_n) prod dl(x_i).
/// Proposals that land on H_n = +inf or outside the support of l are
/// rejected. The initial configuration (given or drawn from l) is redrawn up
/// to 100 times until H_n is finite.
ChainResult mh_sample(const PotentialPair& pair, const ReferenceMeasure& ell, const SamplerConfig& cfg,
                      std::size_t samples);

/// Independent chains with seeds derived from cfg.seed by chain index; at
/// most `threads` run at once. Output order is by chain index.
std::vector<ChainResult> mh_sample_chains(const PotentialPair& pair, const ReferenceMeasure& ell,
                                          const SamplerConfig& cfg, std::size_t samples, std::size_t chains,
                                          unsigned threads = 1);

/// Categorical draws from the exactly enumerated Gibbs law.
std::vector<ParticleConfig> exact_sample_finite(const PotentialPair& pair, const ReferenceMeasure& ell,
                                                std::size_t n, double beta_n, std::uint64_t seed,
                                                std::size_t samples, const enumeration::Options& opts = {});

/// Draws from a discrete law given by probabilities summing to 1.
std::size_t draw_index(const std::vector<double>& cumulative, Rng& rng);
std::vector<double> cumulative(const std::vector<double>& prob);

/// n iid draws from mu_star per sample.
std::vector<ParticleConfig> iid_sample(const DiscreteMeasure& mu_star, std::size_t n, std::uint64_t seed,
                                       std::size_t samples);

/// One JSON object per line: {"chain", "sweep", "points"}.
void write_samples_jsonl(std::ostream& os, const std::vector<ChainResult>& chains);
/// Columns chain,sweep,acceptance,energy, one row per kept sample;
/// acceptance is the mean over the sweeps since the previous kept sample.
void write_diagnostics_csv(std::ostream& os, const std::vector<ChainResult>& chains);

}  // namespace gibbslab
