#include "gibbslab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "gibbslab/detail/parallel.hpp"
#include "gibbslab/functionals.hpp"

namespace gibbslab {
namespace {

constexpr int kInitAttempts = 100;

// Position of one particle plus its reference log-weight. For finite
// references `atom` indexes the atom list.
struct Site {
  Point x;
  std::size_t atom = 0;
  double log_ref = 0.0;
};

class Target {
 public:
  Target(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta)
      : pair_(pair), ell_(ell), n_(n), beta_(beta) {
    if (ell.is_finite()) {
      log_w_.resize(ell.size());
      for (std::size_t a = 0; a < ell.size(); ++a) log_w_[a] = std::log(ell.weights()[a]);
      cum_ = cumulative_weights(ell.weights());
    }
  }

  bool finite() const { return ell_.is_finite(); }

  Site draw_from_reference(Rng& rng) const {
    Site s;
    const std::size_t d = ell_.dim();
    if (finite()) {
      s.atom = draw_index(cum_, rng);
      s.x = ell_.atoms()[s.atom];
      s.log_ref = log_w_[s.atom];
      return s;
    }
    s.x.resize(d);
    if (ell_.box()) {
      for (std::size_t k = 0; k < d; ++k) {
        s.x[k] = ell_.box()->lo[k] + uniform01(rng) * (ell_.box()->hi[k] - ell_.box()->lo[k]);
      }
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      for (std::size_t k = 0; k < d; ++k) s.x[k] = g(rng);
    }
    s.log_ref = ell_.log_density(s.x);
    return s;
  }

  Site site_at(const Point& x) const {
    Site s;
    s.x = x;
    if (finite()) {
      const auto it = std::lower_bound(ell_.atoms().begin(), ell_.atoms().end(), x);
      if (it == ell_.atoms().end() || *it != x) {
        s.log_ref = -kInf;
        return s;
      }
      s.atom = static_cast<std::size_t>(it - ell_.atoms().begin());
      s.log_ref = log_w_[s.atom];
      return s;
    }
    s.log_ref = ell_.log_density(x);
    return s;
  }

  Site propose(const Site& from, double sigma, Rng& rng) const {
    if (finite()) {
      Site s;
      s.atom = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(ell_.size()));
      s.atom = std::min(s.atom, ell_.size() - 1);
      s.x = ell_.atoms()[s.atom];
      s.log_ref = log_w_[s.atom];
      return s;
    }
    Site s;
    s.x = from.x;
    std::normal_distribution<double> g(0.0, sigma);
    for (double& c : s.x) c += g(rng);
    s.log_ref = ell_.log_density(s.x);
    return s;
  }

  // Terms of H_n that involve particle i placed at x.
  double site_energy(const std::vector<Site>& sites, std::size_t i, const Point& x) const {
    const double nd = static_cast<double>(n_);
    double e = pair_.confinement(x) / nd;
    if (e == kInf) return kInf;
    const double c = 1.0 / (2.0 * nd * nd);
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (j == i) continue;
      const double a = pair_.interaction(x, sites[j].x);
      const double b = pair_.symmetric ? a : pair_.interaction(sites[j].x, x);
      e += c * (a + b);
      if (e == kInf) return kInf;
    }
    return e;
  }

  double energy(const std::vector<Site>& sites) const { return functionals::hamiltonian(config(sites), pair_); }

  ParticleConfig config(const std::vector<Site>& sites) const {
    std::vector<Point> pts;
    pts.reserve(sites.size());
    for (const auto& s : sites) pts.push_back(s.x);
    return ParticleConfig(ell_.dim(), std::move(pts));
  }

  double beta() const { return beta_; }
  std::size_t n() const { return n_; }

 private:
  static std::vector<double> cumulative_weights(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<double> p(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = w[i] / total;
    return cumulative(p);
  }

  const PotentialPair& pair_;
  const ReferenceMeasure& ell_;
  std::size_t n_;
  double beta_;
  std::vector<double> log_w_;
  std::vector<double> cum_;
};

bool admissible(const Target& t, const std::vector<Site>& sites) {
  for (const auto& s : sites) {
    if (s.log_ref == -kInf) return false;
  }
  return t.energy(sites) < kInf;
}

ChainResult run_chain(const PotentialPair& pair, const ReferenceMeasure& ell, const SamplerConfig& cfg,
                      std::size_t samples, std::uint64_t stream) {
  if (cfg.n == 0) throw InvalidArgument("sampler: n must be >= 1");
  if (!(cfg.beta_n > 0.0) || !std::isfinite(cfg.beta_n)) throw InvalidArgument("sampler: beta_n must be positive");
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) throw InvalidArgument("sampler: sigma must be positive");
  if (ell.dim() != pair.dim) throw InvalidArgument("sampler: dimension mismatch");

  Rng rng = make_rng(cfg.seed, stream);
  const Target target(pair, ell, cfg.n, cfg.beta_n);
  ChainResult out;

  std::vector<Site> sites;
  bool ok = false;
  int attempt = 0;
  if (cfg.init) {
    if (cfg.init->size() != cfg.n || cfg.init->dim != ell.dim()) {
      throw InvalidArgument("sampler: initial configuration has the wrong shape");
    }
    ++attempt;
    for (const auto& p : cfg.init->points) sites.push_back(target.site_at(p));
    ok = admissible(target, sites);
  }
  while (!ok && attempt < kInitAttempts) {
    ++attempt;
    sites.clear();
    for (std::size_t i = 0; i < cfg.n; ++i) sites.push_back(target.draw_from_reference(rng));
    ok = admissible(target, sites);
  }
  if (!ok) {
    throw NumericalError("sampler: no finite-energy initial configuration after " +
                         std::to_string(kInitAttempts) + " attempts");
  }
  out.diagnostics.init_attempts = static_cast<std::size_t>(attempt);

  const double beta = cfg.beta_n;
  const bool single = cfg.proposal == SamplerConfig::Proposal::kSingleSite;
  double current_energy = target.energy(sites);

  // One sweep; returns the fraction of accepted steps.
  auto sweep = [&]() {
    std::size_t accepted = 0;
    if (single) {
      for (std::size_t step = 0; step < cfg.n; ++step) {
        const std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>(uniform01(rng) * static_cast<double>(cfg.n)), cfg.n - 1);
        Site prop = target.propose(sites[i], cfg.sigma, rng);
        const double u = uniform01(rng);
        if (prop.log_ref == -kInf) continue;
        const double e_new = target.site_energy(sites, i, prop.x);
        if (e_new == kInf) continue;
        const double e_old = target.site_energy(sites, i, sites[i].x);
        const double log_ratio = -beta * (e_new - e_old) + prop.log_ref - sites[i].log_ref;
        if (std::log(u) < log_ratio) {
          sites[i] = std::move(prop);
          ++accepted;
        }
      }
      return static_cast<double>(accepted) / static_cast<double>(cfg.n);
    }
    std::vector<Site> prop(cfg.n);
    double log_ref_delta = 0.0;
    bool inside = true;
    for (std::size_t i = 0; i < cfg.n; ++i) {
      prop[i] = target.propose(sites[i], cfg.sigma, rng);
      if (prop[i].log_ref == -kInf) inside = false;
      if (inside) log_ref_delta += prop[i].log_ref - sites[i].log_ref;
    }
    const double u = uniform01(rng);
    if (!inside) return 0.0;
    const double e_new = target.energy(prop);
    if (e_new == kInf) return 0.0;
    if (std::log(u) < -beta * (e_new - current_energy) + log_ref_delta) {
      sites = std::move(prop);
      current_energy = e_new;
      return 1.0;
    }
    return 0.0;
  };

  for (std::size_t s = 0; s < cfg.burn_in; ++s) out.diagnostics.acceptance.push_back(sweep());
  const std::size_t thin = std::max<std::size_t>(cfg.thinning, 1);
  double acc_sum = 0.0;
  std::size_t acc_count = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t s = 0; s < thin; ++s) {
      const double a = sweep();
      out.diagnostics.acceptance.push_back(a);
      acc_sum += a;
      ++acc_count;
    }
    out.samples.push_back(target.config(sites));
    out.diagnostics.energy.push_back(target.energy(sites));
    out.diagnostics.kept_sweeps.push_back(out.diagnostics.acceptance.size());
  }
  out.diagnostics.acceptance_rate = acc_count ? acc_sum / static_cast<double>(acc_count) : 0.0;
  out.diagnostics.energy_ess = effective_sample_size(out.diagnostics.energy);
  return out;
}

}  // namespace

nlohmann::json to_json(const SamplerConfig& cfg) {
  nlohmann::json j{{"n", cfg.n},
                   {"beta_n", cfg.beta_n},
                   {"proposal", cfg.proposal == SamplerConfig::Proposal::kSingleSite ? "single_site" : "random_walk"},
                   {"sigma", cfg.sigma},
                   {"burn_in", cfg.burn_in},
                   {"thinning", cfg.thinning},
                   {"seed", cfg.seed}};
  if (cfg.init) j["init"] = to_json(*cfg.init);
  return j;
}

double effective_sample_size(const std::vector<double>& trace) {
  const std::size_t n = trace.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double x : trace) mean += x;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (trace[t] - mean) * (trace[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double g0 = autocov(0);
  if (!(g0 > 0.0)) return static_cast<double>(n);
  double sum = 0.0;
  double prev = kInf;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = autocov(2 * m) + autocov(2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev);
    sum += pair;
    prev = pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum / g0, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n) / tau, static_cast<double>(n));
}

ChainResult mh_sample(const PotentialPair& pair, const ReferenceMeasure& ell, const SamplerConfig& cfg,
                      std::size_t samples) {
  return run_chain(pair, ell, cfg, samples, 0);
}

std::vector<ChainResult> mh_sample_chains(const PotentialPair& pair, const ReferenceMeasure& ell,
                                          const SamplerConfig& cfg, std::size_t samples, std::size_t chains,
                                          unsigned threads) {
  std::vector<ChainResult> out(chains);
  detail::parallel_for(chains, threads, [&](std::size_t c) { out[c] = run_chain(pair, ell, cfg, samples, c); });
  return out;
}

std::vector<double> cumulative(const std::vector<double>& prob) {
  std::vector<double> c(prob.size());
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    s += prob[i];
    c[i] = s;
  }
  return c;
}

std::size_t draw_index(const std::vector<double>& cum, Rng& rng) {
  if (cum.empty()) throw InvalidArgument("draw_index: empty distribution");
  const double u = uniform01(rng) * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

std::vector<ParticleConfig> exact_sample_finite(const PotentialPair& pair, const ReferenceMeasure& ell,
                                                std::size_t n, double beta_n, std::uint64_t seed,
                                                std::size_t samples, const enumeration::Options& opts) {
  const auto law = enumeration::gibbs_law(pair, ell, n, beta_n, opts);
  const auto cum = cumulative(law.prob);
  Rng rng = make_rng(seed);
  std::vector<ParticleConfig> out;
  out.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) out.push_back(law.config(draw_index(cum, rng)));
  return out;
}

std::vector<ParticleConfig> iid_sample(const DiscreteMeasure& mu_star, std::size_t n, std::uint64_t seed,
                                       std::size_t samples) {
  if (n == 0) throw InvalidArgument("iid_sample: n must be >= 1");
  const auto cum = cumulative(mu_star.weights());
  Rng rng = make_rng(seed);
  std::vector<ParticleConfig> out;
  out.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(mu_star.atom(draw_index(cum, rng)));
    out.emplace_back(mu_star.dim(), std::move(pts));
  }
  return out;
}

void write_samples_jsonl(std::ostream& os, const std::vector<ChainResult>& chains) {
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& r = chains[c];
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      nlohmann::json j{{"chain", c}, {"sweep", r.diagnostics.kept_sweeps[k]}, {"points", r.samples[k].points}};
      os << j.dump() << '\n';
    }
  }
}

void write_diagnostics_csv(std::ostream& os, const std::vector<ChainResult>& chains) {
  const auto old = os.precision(17);
  os << "chain,sweep,acceptance,energy\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& d = chains[c].diagnostics;
    std::size_t prev = 0;
    for (std::size_t k = 0; k < d.kept_sweeps.size(); ++k) {
      const std::size_t s = d.kept_sweeps[k];
      double acc = 0.0;
      for (std::size_t t = prev; t < s; ++t) acc += d.acceptance[t];
      acc /= static_cast<double>(std::max<std::size_t>(s - prev, 1));
      os << c << ',' << s << ',' << acc << ',' << d.energy[k] << '\n';
      prev = s;
    }
  }
  os.precision(old);
}

}  // namespace gibbslab
