#include "gibbslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gibbslab/functionals.hpp"
#include "gibbslab/sampler.hpp"

namespace gibbslab::harness {

double laplace_exact(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f, std::size_t n,
                     double beta, const enumeration::Options& opts) {
  return enumeration::laplace_terms(pair, ell, f, n, beta, opts).value();
}

double log_partition_function(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                              const enumeration::Options& opts) {
  return enumeration::log_partition(pair, ell, n, beta, opts);
}

RateReference rate_reference(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                             bool entropic, const GridSpec& grid, const VariationalOptions& opts) {
  VariationalOptions plain = opts;
  plain.tilt.reset();
  VariationalOptions tilted = opts;
  if (!f.is_zero() || f.offset() != 0.0) tilted.tilt = f;
  RateReference r;
  r.rate = entropic ? "I" : "J";
  r.untilted = entropic ? minimize_I(pair, ell, grid, plain) : minimize_J(pair, grid, plain);
  r.tilted = tilted.tilt ? (entropic ? minimize_I(pair, ell, grid, tilted) : minimize_J(pair, grid, tilted))
                         : r.untilted;
  r.inf_rate = r.untilted.value;
  r.inf_tilted = r.tilted.value;
  r.value = r.inf_tilted - r.inf_rate;
  return r;
}

double ExperimentReport::gap_at(std::size_t n) const {
  for (const auto& row : rows) {
    if (row.n == n) return row.gap;
  }
  throw InvalidArgument("ExperimentReport: no row for n = " + std::to_string(n));
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"beta_n", row.beta}, {"exact", row.exact}, {"reference", row.reference},
                    {"gap", row.gap}});
  }
  return {{"schedule", to_json(r.schedule)},
          {"functional", r.functional},
          {"rate", r.rate},
          {"reference", r.reference},
          {"alternate_reference", r.alternate_reference},
          {"nonuniform_gibbs_reference", r.nonuniform_gibbs_reference},
          {"rows", rows},
          {"metadata", r.metadata}};
}

void write_csv(std::ostream& os, const ExperimentReport& r) {
  const auto old = os.precision(17);
  os << "n,beta_n,exact,reference,gap\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.beta << ',' << row.exact << ',' << row.reference << ',' << row.gap << '\n';
  }
  os.precision(old);
}

ExperimentReport laplace_vs_rate(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                                 const ScheduleSpec& schedule, const LaplaceOptions& opts) {
  const GridSpec grid = opts.grid ? *opts.grid : GridSpec::from_reference(ell);
  const bool entropic = schedule.is_linear();
  const RateReference main = rate_reference(pair, ell, f, entropic, grid, opts.variational);
  const RateReference other = rate_reference(pair, ell, f, !entropic, grid, opts.variational);

  ExperimentReport r(schedule);
  r.functional = f.describe();
  r.rate = main.rate;
  r.reference = main.value;
  r.alternate_reference = other.value;

  double lo = kInf, hi = -kInf;
  for (const auto& x : grid.nodes) {
    const double l = ell.weight_at(x);
    if (!(l > 0.0)) continue;
    const double g = std::log(l) - pair.confinement(x);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  r.nonuniform_gibbs_reference = hi - lo > 1e-9;

  for (std::size_t n : schedule.n_list()) {
    ExperimentRow row;
    row.n = n;
    row.beta = schedule.beta(n);
    row.exact = laplace_exact(pair, ell, f, n, row.beta, opts.enumeration);
    row.reference = r.reference;
    row.gap = std::abs(row.exact - row.reference);
    r.rows.push_back(row);
  }
  r.metadata = {{"potential", pair.name},
                {"grid", to_json(grid)},
                {"enumeration_budget", opts.enumeration.budget},
                {"variational_seed", opts.variational.seed},
                {"variational_starts", opts.variational.starts},
                {"inf_rate", main.inf_rate},
                {"inf_tilted", main.inf_tilted},
                {"reference_converged", main.tilted.converged && main.untilted.converged}};
  return r;
}

nlohmann::json to_json(const BiasReport& r) {
  return {{"mode", r.mode}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"gap", r.gap},
          {"standard_error", r.standard_error}, {"samples", r.samples}, {"passed", r.passed}};
}

BiasReport bias_identity_check(const DiscreteMeasure& mu_star, const InteractionFn& w, std::size_t n,
                               std::uint64_t budget) {
  if (n == 0) throw InvalidArgument("bias_identity_check: n must be >= 1");
  const std::size_t m = mu_star.size();
  const std::uint64_t total = enumeration::config_count(m, n, budget);
  BiasReport r;
  r.mode = "exact";
  r.samples = total;
  CompensatedSum lhs;
  std::vector<std::size_t> idx(n, 0);
  std::vector<Point> pts(n);
  for (std::uint64_t c = 0; c < total; ++c) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = mu_star.atom(idx[i]);
      p *= mu_star.weight(idx[i]);
    }
    const DiscreteMeasure ln = empirical_measure(ParticleConfig(mu_star.dim(), pts));
    lhs.add(p * functionals::interaction_energy_offdiag(ln, w));
    for (std::size_t k = n; k > 0; --k) {
      if (++idx[k - 1] < m) break;
      idx[k - 1] = 0;
    }
  }
  r.lhs = lhs.value();
  r.rhs = (static_cast<double>(n) - 1.0) / static_cast<double>(n) * functionals::interaction_energy(mu_star, w);
  r.gap = std::abs(r.lhs - r.rhs);
  r.passed = r.gap <= 1e-12;
  return r;
}

BiasReport bias_identity_mc(const DiscreteMeasure& mu_star, const InteractionFn& w, std::size_t n,
                            std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("bias_identity_mc: need at least 2 samples");
  const auto draws = iid_sample(mu_star, n, seed, samples);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const double x = functionals::interaction_energy_offdiag(empirical_measure(draws[k]), w);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  BiasReport r;
  r.mode = "monte_carlo";
  r.samples = samples;
  r.lhs = mean;
  r.rhs = (static_cast<double>(n) - 1.0) / static_cast<double>(n) * functionals::interaction_energy(mu_star, w);
  r.gap = std::abs(r.lhs - r.rhs);
  r.standard_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  r.passed = r.gap <= 3.0 * r.standard_error;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

namespace {

const char* distance_name(DistanceKind k) {
  switch (k) {
    case DistanceKind::kBoundedLipschitz: return "d_bl";
    case DistanceKind::kPsi: return "d_psi";
    case DistanceKind::kWasserstein: return "wasserstein_p";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const ConcentrationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"beta_n", row.beta}, {"median", row.median}, {"mean", row.mean},
                    {"acceptance", row.acceptance}, {"samples", row.samples}});
  }
  return {{"distance", r.distance}, {"rows", rows}, {"metadata", r.metadata}};
}

void write_csv(std::ostream& os, const ConcentrationReport& r) {
  const auto old = os.precision(17);
  os << "n,beta_n,median,mean,acceptance,samples\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.beta << ',' << row.median << ',' << row.mean << ',' << row.acceptance << ','
       << row.samples << '\n';
  }
  os.precision(old);
}

ConcentrationReport concentration_experiment(const PotentialPair& pair, const ReferenceMeasure& ell,
                                             const ScheduleSpec& schedule, const DiscreteMeasure& target,
                                             const ConcentrationOptions& opts) {
  if (opts.distance == DistanceKind::kPsi && !opts.psi) {
    throw InvalidArgument("concentration_experiment: d_psi needs a weight function");
  }
  ConcentrationReport r;
  r.distance = distance_name(opts.distance);
  for (std::size_t n : schedule.n_list()) {
    SamplerConfig cfg;
    cfg.n = n;
    cfg.beta_n = schedule.beta(n);
    cfg.sigma = opts.sigma0 * std::pow(static_cast<double>(n), -opts.sigma_power);
    cfg.burn_in = opts.burn_in;
    cfg.thinning = opts.thinning;
    cfg.seed = derive_seed(opts.seed, n);
    const auto chains = mh_sample_chains(pair, ell, cfg, opts.samples_per_chain, opts.chains, opts.threads);
    std::vector<double> dist;
    double acc = 0.0;
    for (const auto& c : chains) {
      acc += c.diagnostics.acceptance_rate;
      for (const auto& x : c.samples) {
        const DiscreteMeasure ln = empirical_measure(x);
        switch (opts.distance) {
          case DistanceKind::kBoundedLipschitz: dist.push_back(d_bl(ln, target)); break;
          case DistanceKind::kPsi: dist.push_back(d_psi(ln, target, *opts.psi)); break;
          case DistanceKind::kWasserstein: dist.push_back(wasserstein_p(ln, target, opts.p)); break;
        }
      }
    }
    ConcentrationRow row;
    row.n = n;
    row.beta = cfg.beta_n;
    row.samples = dist.size();
    row.median = median(dist);
    double s = 0.0;
    for (double d : dist) s += d;
    row.mean = s / static_cast<double>(dist.size());
    row.acceptance = acc / static_cast<double>(chains.size());
    r.rows.push_back(row);
  }
  r.metadata = {{"potential", pair.name},
                {"schedule", to_json(schedule)},
                {"chains", opts.chains},
                {"samples_per_chain", opts.samples_per_chain},
                {"burn_in", opts.burn_in},
                {"thinning", opts.thinning},
                {"sigma0", opts.sigma0},
                {"sigma_power", opts.sigma_power},
                {"seed", opts.seed}};
  return r;
}

std::vector<double> psi_tightness_probe(const std::vector<DiscreteMeasure>& samples, const WeightFunction& psi,
                                        const std::vector<double>& radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    double sup = 0.0;
    for (const auto& mu : samples) sup = std::max(sup, tail_psi_mass(mu, psi, r));
    out.push_back(sup);
  }
  return out;
}

}  // namespace gibbslab::harness
