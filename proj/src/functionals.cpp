#include "gibbslab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace gibbslab {

FunctionalValue FunctionalValue::from(double v) {
  FunctionalValue f;
  f.value = v;
  f.finite = v < kInf;
  return f;
}

nlohmann::json to_json(const FunctionalValue& v) {
  nlohmann::json j;
  j["value"] = v.finite ? nlohmann::json(v.value) : nlohmann::json("inf");
  j["finite"] = v.finite;
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [k, x] : v.breakdown) b[k] = std::isfinite(x) ? nlohmann::json(x) : nlohmann::json("inf");
  j["breakdown"] = b;
  if (!v.diverged.empty()) j["diverged"] = v.diverged;
  if (!v.warnings.empty()) j["warnings"] = v.warnings;
  return j;
}

namespace functionals {
namespace {

double checked_w(const InteractionFn& w, std::span<const double> x, std::span<const double> y) {
  return checked_value(w(x, y), "W", x, y);
}

// (1/2) sum_{i,j} w_i w_j F(a_i, a_j) with an optional diagonal skip.
template <class F>
double half_double_sum(const DiscreteMeasure& mu, bool include_diagonal, F&& f) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (i == j && !include_diagonal) continue;
      const double v = f(mu.atom(i), mu.atom(j));
      acc.add(scaled(0.5 * mu.weight(i) * mu.weight(j), v, "interaction term"));
      if (acc.infinite()) return kInf;
    }
  }
  return acc.value();
}

}  // namespace

double hamiltonian(const ParticleConfig& config, const PotentialPair& pair) {
  const std::size_t n = config.size();
  if (n == 0) throw InvalidArgument("hamiltonian: n must be >= 1");
  if (config.dim != pair.dim) throw InvalidArgument("hamiltonian: dimension mismatch");
  const double nd = static_cast<double>(n);
  CompensatedSum acc;
  for (const auto& x : config.points) {
    acc.add(pair.confinement(x) / nd);
    if (acc.infinite()) return kInf;
  }
  const double c = 1.0 / (2.0 * nd * nd);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = pair.symmetric ? i + 1 : 0; j < n; ++j) {
      if (i == j) continue;
      const double w = pair.interaction(config.points[i], config.points[j]);
      acc.add((pair.symmetric ? 2.0 * c : c) * w);
      if (acc.infinite()) return kInf;
    }
  }
  return acc.value();
}

double confinement_energy(const DiscreteMeasure& mu, const PotentialPair& pair) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc.add(scaled(mu.weight(i), pair.confinement(mu.atom(i)), "confinement term"));
    if (acc.infinite()) return kInf;
  }
  return acc.value();
}

double interaction_energy(const DiscreteMeasure& mu, const InteractionFn& w) {
  return half_double_sum(mu, true, [&](const Point& x, const Point& y) { return checked_w(w, x, y); });
}

double interaction_energy_offdiag(const DiscreteMeasure& mu, const InteractionFn& w) {
  return half_double_sum(mu, false, [&](const Point& x, const Point& y) { return checked_w(w, x, y); });
}

double diagonal_mass(const DiscreteMeasure& mu) {
  CompensatedSum acc;
  for (double w : mu.weights()) acc.add(w * w);
  return acc.value();
}

TruncatedInteraction truncated_interaction(const DiscreteMeasure& mu, const InteractionFn& w, double cap) {
  if (!std::isfinite(cap)) throw InvalidArgument("truncated_interaction: M must be finite");
  auto capped = [&](const Point& x, const Point& y) { return std::min(checked_w(w, x, y), cap); };
  return {half_double_sum(mu, true, capped), half_double_sum(mu, false, capped)};
}

double relative_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw InvalidArgument("relative_entropy: dimension mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double p = mu.weight(i);
    const double q = nu.mass_at(mu.atom(i));
    if (q == 0.0) return kInf;
    acc.add(p * std::log(p / q));
  }
  return std::max(0.0, acc.value());
}

GibbsReference gibbs_reference(const PotentialPair& pair, const ReferenceMeasure& ell) {
  if (!ell.is_finite()) throw InvalidArgument("gibbs_reference: reference must be finite");
  if (ell.dim() != pair.dim) throw InvalidArgument("gibbs_reference: dimension mismatch");
  std::vector<double> logw(ell.size());
  LogSumExp lse;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    logw[i] = std::log(ell.weights()[i]) - pair.confinement(ell.atoms()[i]);
    lse.add(logw[i]);
  }
  const double log_mass = lse.value();
  if (!std::isfinite(log_mass)) throw NumericalError("gibbs_reference: e^{-V} l has zero mass");
  std::vector<double> w(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) w[i] = std::exp(logw[i] - log_mass);
  return {DiscreteMeasure(ell.dim(), ell.atoms(), std::move(w)), std::exp(log_mass)};
}

FunctionalValue rate_I(const DiscreteMeasure& mu, const PotentialPair& pair, const ReferenceMeasure& ell) {
  const GibbsReference ref = gibbs_reference(pair, ell);
  FunctionalValue out;
  if (std::abs(ref.mass - 1.0) > 1e-10) {
    out.warnings.push_back("int e^{-V} dl = " + std::to_string(ref.mass) +
                           "; entropy computed against the normalized reference");
  }
  const double entropy = relative_entropy(mu, ref.measure);
  out.breakdown["entropy"] = entropy;
  if (entropy == kInf) {
    out.value = kInf;
    out.finite = false;
    out.diverged = "entropy";
    return out;
  }
  const double inter = interaction_energy(mu, pair.interaction_fn);
  out.breakdown["interaction"] = inter;
  if (inter == kInf) {
    out.value = kInf;
    out.finite = false;
    out.diverged = "interaction";
    return out;
  }
  out.value = entropy + inter;
  return out;
}

FunctionalValue rate_J(const DiscreteMeasure& mu, const PotentialPair& pair) {
  FunctionalValue out;
  const double conf = confinement_energy(mu, pair);
  out.breakdown["confinement"] = conf;
  if (conf == kInf) {
    out.value = kInf;
    out.finite = false;
    out.diverged = "confinement";
    return out;
  }
  const double inter = interaction_energy(mu, pair.interaction_fn);
  out.breakdown["interaction"] = inter;
  if (inter == kInf) {
    out.value = kInf;
    out.finite = false;
    out.diverged = "interaction";
    return out;
  }
  std::vector<double> v(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) v[i] = pair.confinement(mu.atom(i));
  CompensatedSum quad;
  double scale = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const double term =
          0.5 * mu.weight(i) * mu.weight(j) * (v[i] + v[j] + pair.interaction(mu.atom(i), mu.atom(j)));
      quad.add(term);
      scale += std::abs(term);
    }
  }
  const double q = quad.value();
  const double sum = conf + inter;
  out.breakdown["quadratic_form"] = q;
  if (std::abs(q - sum) > 1e-12 * (1.0 + scale)) {
    throw NumericalError("rate_J: quadratic form and V + W routes disagree");
  }
  out.value = sum;
  return out;
}

FunctionalValue rate_J_n_offdiag(const DiscreteMeasure& mu, const PotentialPair& pair, std::size_t n,
                                 double beta_n) {
  if (!(beta_n > 0.0)) throw InvalidArgument("rate_J_n_offdiag: beta_n must be positive");
  const double coef = 1.0 - static_cast<double>(n) / beta_n;
  FunctionalValue out;
  const double conf = confinement_energy(mu, pair);
  const double conf_term = scaled(coef, conf, "(1 - n/beta) V");
  out.breakdown["confinement"] = conf_term;
  const double inter = interaction_energy_offdiag(mu, pair.interaction_fn);
  out.breakdown["interaction_offdiag"] = inter;
  CompensatedSum acc;
  acc.add(conf_term);
  acc.add(inter);
  out.value = acc.value();
  out.finite = out.value < kInf;
  if (!out.finite) out.diverged = conf_term == kInf ? "confinement" : "interaction_offdiag";
  return out;
}

CoupledEnergy coupled_energy(const DiscreteMeasure& zeta, const PotentialPair& pair) {
  const std::size_t d = pair.dim;
  if (zeta.dim() != 2 * d) throw InvalidArgument("coupled_energy: zeta must live on R^d x R^d");
  CompensatedSum w_acc, j_acc;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const auto& a = zeta.atom(i);
    std::span<const double> x(a.data(), d), y(a.data() + d, d);
    const double w = pair.interaction(x, y);
    const double v = pair.confinement(x) + pair.confinement(y);
    w_acc.add(scaled(0.5 * zeta.weight(i), w, "coupled W"));
    j_acc.add(scaled(0.5 * zeta.weight(i), v + w, "coupled J"));
  }
  return {w_acc.value(), j_acc.value()};
}

DiscreteMeasure product_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<Point> atoms;
  std::vector<double> w;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      Point z = mu.atom(i);
      z.insert(z.end(), nu.atom(j).begin(), nu.atom(j).end());
      atoms.push_back(std::move(z));
      w.push_back(mu.weight(i) * nu.weight(j));
    }
  }
  return DiscreteMeasure(mu.dim() + nu.dim(), std::move(atoms), std::move(w));
}

double coupled_free_energy(const DiscreteMeasure& zeta, const PotentialPair& pair, const ReferenceMeasure& ell) {
  const GibbsReference g = gibbs_reference(pair, ell);
  const double ent = relative_entropy(zeta, product_measure(g.measure, g.measure));
  if (ent == kInf) return kInf;
  const double w = coupled_energy(zeta, pair).frak_w;
  return w == kInf ? kInf : ent + w;
}

double star_gap(const std::vector<FunctionalValue>& values, std::size_t at) {
  if (at >= values.size()) throw InvalidArgument("star_gap: index out of range");
  double best = kInf;
  for (const auto& v : values) best = std::min(best, v.value);
  if (best == kInf) throw InvalidArgument("star_gap: all values are infinite");
  const double v = values[at].value;
  return v == kInf ? kInf : v - best;
}

}  // namespace functionals
}  // namespace gibbslab
