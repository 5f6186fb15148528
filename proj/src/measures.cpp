#include "gibbslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "gibbslab/detail/min_cost_flow.hpp"
#include "gibbslab/detail/simplex.hpp"

namespace gibbslab {
namespace {

constexpr double kDropWeight = 1e-15;
constexpr std::size_t kLpSupportLimit = 20;

void require_same_dim(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const char* op) {
  if (mu.dim() != nu.dim()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(mu.dim()) +
                          " vs " + std::to_string(nu.dim()) + ")");
  }
}

// Union support in lexicographic order with signed mass mu - nu per node.
struct SignedSupport {
  std::vector<Point> nodes;
  std::vector<double> mass;
};

SignedSupport signed_union(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  SignedSupport s;
  std::size_t i = 0, j = 0;
  while (i < mu.size() || j < nu.size()) {
    if (j == nu.size() || (i < mu.size() && mu.atom(i) < nu.atom(j))) {
      s.nodes.push_back(mu.atom(i));
      s.mass.push_back(mu.weight(i));
      ++i;
    } else if (i == mu.size() || nu.atom(j) < mu.atom(i)) {
      s.nodes.push_back(nu.atom(j));
      s.mass.push_back(-nu.weight(j));
      ++j;
    } else {
      s.nodes.push_back(mu.atom(i));
      s.mass.push_back(mu.weight(i) - nu.weight(j));
      ++i;
      ++j;
    }
  }
  return s;
}

// Pairs (i, j), i < j, whose Lipschitz constraint is not implied by others.
// On the line only neighbours matter; pairs at distance >= 1 are implied by
// the oscillation bound.
std::vector<std::pair<std::size_t, std::size_t>> lipschitz_pairs(const std::vector<Point>& nodes,
                                                                 std::size_t dim) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = nodes.size();
  if (dim == 1) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (nodes[i + 1][0] - nodes[i][0] < 1.0) pairs.emplace_back(i, i + 1);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (distance(nodes[i], nodes[j]) < 1.0) pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

double d_bl_lp(const SignedSupport& s, std::size_t dim) {
  // Variables g = f + 1/2 in [0, 1]; the shift is harmless because the
  // signed masses sum to zero.
  const std::size_t n = s.nodes.size();
  detail::LinearProgram lp;
  lp.num_vars = static_cast<int>(n);
  lp.objective = s.mass;
  for (std::size_t i = 0; i < n; ++i) {
    detail::LpRow row;
    row.coeffs.assign(n, 0.0);
    row.coeffs[i] = 1.0;
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (auto [i, j] : lipschitz_pairs(s.nodes, dim)) {
    const double dij = distance(s.nodes[i], s.nodes[j]);
    for (int sign : {1, -1}) {
      detail::LpRow row;
      row.coeffs.assign(n, 0.0);
      row.coeffs[i] = sign;
      row.coeffs[j] = -sign;
      row.rhs = dij;
      lp.rows.push_back(std::move(row));
    }
  }
  const auto sol = detail::solve_lp(lp);
  if (sol.status != detail::LpStatus::kOptimal) throw NumericalError("d_bl: LP did not converge");
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(s.mass[i] * (sol.x[i] - 0.5));
  return std::max(0.0, acc.value());
}

double d_bl_flow(const SignedSupport& s, std::size_t dim) {
  const std::size_t n = s.nodes.size();
  const std::size_t hub = n;
  detail::MinCostFlow flow(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    flow.set_supply(i, s.mass[i]);
    flow.add_edge(i, hub, 0.5);
    flow.add_edge(hub, i, 0.5);
  }
  for (auto [i, j] : lipschitz_pairs(s.nodes, dim)) {
    const double dij = distance(s.nodes[i], s.nodes[j]);
    flow.add_edge(i, j, dij);
    flow.add_edge(j, i, dij);
  }
  // Supplies may not cancel exactly in floating point; park the residue on the hub.
  double residue = 0.0;
  for (double m : s.mass) residue += m;
  flow.set_supply(hub, -residue);
  return std::max(0.0, flow.solve());
}

double transport_cost(std::span<const double> x, std::span<const double> y, double p) {
  const double d = distance(x, y);
  return p == 1.0 ? d : std::pow(d, p);
}

double wasserstein_quantile(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  std::size_t i = 0, j = 0;
  double ra = mu.weight(0), rb = nu.weight(0);
  CompensatedSum acc;
  while (i < mu.size() && j < nu.size()) {
    const double m = std::min(ra, rb);
    acc.add(m * transport_cost(mu.atom(i), nu.atom(j), p));
    ra -= m;
    rb -= m;
    if (ra <= 1e-15) {
      if (++i < mu.size()) ra = mu.weight(i);
    }
    if (rb <= 1e-15) {
      if (++j < nu.size()) rb = nu.weight(j);
    }
  }
  return acc.value();
}

double wasserstein_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const std::size_t m = mu.size(), k = nu.size();
  detail::LinearProgram lp;
  lp.num_vars = static_cast<int>(m * k);
  lp.objective.resize(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      lp.objective[i * k + j] = -transport_cost(mu.atom(i), nu.atom(j), p);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    detail::LpRow row;
    row.coeffs.assign(m * k, 0.0);
    for (std::size_t j = 0; j < k; ++j) row.coeffs[i * k + j] = 1.0;
    row.relation = detail::Relation::kEqual;
    row.rhs = mu.weight(i);
    lp.rows.push_back(std::move(row));
  }
  // The last column constraint is implied by the others.
  for (std::size_t j = 0; j + 1 < k; ++j) {
    detail::LpRow row;
    row.coeffs.assign(m * k, 0.0);
    for (std::size_t i = 0; i < m; ++i) row.coeffs[i * k + j] = 1.0;
    row.relation = detail::Relation::kEqual;
    row.rhs = nu.weight(j);
    lp.rows.push_back(std::move(row));
  }
  const auto sol = detail::solve_lp(lp);
  if (sol.status != detail::LpStatus::kOptimal) {
    throw NumericalError("wasserstein_p: transport LP did not converge");
  }
  CompensatedSum acc;
  for (std::size_t v = 0; v < m * k; ++v) acc.add(-lp.objective[v] * sol.x[v]);
  return std::max(0.0, acc.value());
}

double wasserstein_flow(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const std::size_t m = mu.size(), k = nu.size();
  detail::MinCostFlow flow(m + k);
  double residue = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    flow.set_supply(i, mu.weight(i));
    residue += mu.weight(i);
  }
  for (std::size_t j = 0; j < k; ++j) {
    flow.set_supply(m + j, -nu.weight(j));
    residue -= nu.weight(j);
  }
  flow.set_supply(m + k - 1, -nu.weight(k - 1) - residue);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      flow.add_edge(i, m + j, transport_cost(mu.atom(i), nu.atom(j), p));
    }
  }
  return std::max(0.0, flow.solve());
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Point> atoms,
                                 std::vector<double> weights)
    : dim_(dim) {
  if (dim == 0) throw InvalidArgument("DiscreteMeasure: dimension must be >= 1");
  if (atoms.empty()) throw InvalidArgument("DiscreteMeasure: empty support");
  if (atoms.size() != weights.size()) {
    throw InvalidArgument("DiscreteMeasure: atoms and weights differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].size() != dim) throw InvalidArgument("DiscreteMeasure: atom of wrong dimension");
    for (double c : atoms[i]) {
      if (!std::isfinite(c)) throw InvalidArgument("DiscreteMeasure: non-finite coordinate");
    }
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("DiscreteMeasure: weights must be finite and non-negative");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("DiscreteMeasure: weights sum to " + std::to_string(total));
  }

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  for (std::size_t idx : order) {
    if (!atoms_.empty() && atoms_.back() == atoms[idx]) {
      weights_.back() += weights[idx];
    } else {
      atoms_.push_back(std::move(atoms[idx]));
      weights_.push_back(weights[idx]);
    }
  }
  std::size_t keep = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (weights_[i] >= kDropWeight) {
      if (keep != i) {
        atoms_[keep] = std::move(atoms_[i]);
        weights_[keep] = weights_[i];
      }
      ++keep;
    }
  }
  if (keep == 0) throw InvalidArgument("DiscreteMeasure: all weights vanish");
  atoms_.resize(keep);
  weights_.resize(keep);
  CompensatedSum s;
  for (double w : weights_) s.add(w);
  const double z = s.value();
  for (double& w : weights_) w /= z;
}

DiscreteMeasure DiscreteMeasure::dirac(Point x) {
  const std::size_t d = x.size();
  return DiscreteMeasure(d, {std::move(x)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim, std::vector<Point> atoms) {
  const std::size_t n = atoms.size();
  if (n == 0) throw InvalidArgument("DiscreteMeasure::uniform: empty support");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(dim, std::move(atoms), std::move(w));
}

std::size_t DiscreteMeasure::find(std::span<const double> x) const {
  const Point key(x.begin(), x.end());
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), key);
  if (it != atoms_.end() && *it == key) return static_cast<std::size_t>(it - atoms_.begin());
  return size();
}

double DiscreteMeasure::mass_at(std::span<const double> x) const {
  const std::size_t i = find(x);
  return i < size() ? weights_[i] : 0.0;
}

ParticleConfig::ParticleConfig(std::size_t d, std::vector<Point> pts) : dim(d), points(std::move(pts)) {
  if (d == 0) throw InvalidArgument("ParticleConfig: dimension must be >= 1");
  if (points.empty()) throw InvalidArgument("ParticleConfig: n must be >= 1");
  for (const auto& p : points) {
    if (p.size() != d) throw InvalidArgument("ParticleConfig: point of wrong dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw InvalidArgument("ParticleConfig: non-finite coordinate");
    }
  }
}

WeightFunction::WeightFunction(std::string name, Fn fn, bool growth_condition)
    : name_(std::move(name)), fn_(std::move(fn)), growth_(growth_condition) {}

WeightFunction WeightFunction::norm_power(double q) {
  if (!(q > 0)) throw InvalidArgument("norm_power: q must be positive");
  return WeightFunction(
      "norm_pow:" + std::to_string(q),
      [q](std::span<const double> x) { return std::pow(norm(x), q); }, true);
}

WeightFunction WeightFunction::one_plus_norm() {
  return WeightFunction(
      "one_plus_norm", [](std::span<const double> x) { return 1.0 + norm(x); }, true);
}

double WeightFunction::operator()(std::span<const double> x) const {
  const double v = fn_(x);
  if (!std::isfinite(v) || v < 0.0) {
    throw NumericalError("weight function " + name_ + " is negative or non-finite at " +
                         format_point(x));
  }
  return v;
}

DiscreteMeasure empirical_measure(const ParticleConfig& config) {
  const std::size_t n = config.size();
  if (n == 0) throw InvalidArgument("empirical_measure: n must be >= 1");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(config.dim, config.points, std::move(w));
}

double d_bl(const DiscreteMeasure& mu, const DiscreteMeasure& nu, BlMethod method) {
  require_same_dim(mu, nu, "d_bl");
  if (mu == nu) return 0.0;
  const SignedSupport s = signed_union(mu, nu);
  if (method == BlMethod::kAuto) {
    method = s.nodes.size() <= kLpSupportLimit ? BlMethod::kLinearProgram : BlMethod::kNetworkFlow;
  }
  return method == BlMethod::kLinearProgram ? d_bl_lp(s, mu.dim()) : d_bl_flow(s, mu.dim());
}

double psi_integral(const DiscreteMeasure& mu, const WeightFunction& psi) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) acc.add(mu.weight(i) * psi(mu.atom(i)));
  return acc.value();
}

double d_psi(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const WeightFunction& psi) {
  require_same_dim(mu, nu, "d_psi");
  return d_bl(mu, nu) + std::abs(psi_integral(mu, psi) - psi_integral(nu, psi));
}

double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     TransportMethod method) {
  require_same_dim(mu, nu, "wasserstein_p");
  if (!(p >= 1.0)) throw InvalidArgument("wasserstein_p: p must be >= 1");
  if (mu == nu) return 0.0;
  if (method == TransportMethod::kAuto) {
    if (mu.dim() == 1) {
      method = TransportMethod::kQuantile;
    } else {
      method = mu.size() * nu.size() <= 400 ? TransportMethod::kLinearProgram
                                            : TransportMethod::kNetworkFlow;
    }
  }
  switch (method) {
    case TransportMethod::kQuantile:
      if (mu.dim() != 1) throw InvalidArgument("wasserstein_p: quantile coupling needs d = 1");
      return wasserstein_quantile(mu, nu, p);
    case TransportMethod::kLinearProgram:
      return wasserstein_lp(mu, nu, p);
    default:
      return wasserstein_flow(mu, nu, p);
  }
}

double tail_psi_mass(const DiscreteMeasure& mu, const WeightFunction& psi, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("tail_psi_mass: r must be >= 0");
  CompensatedSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (norm(mu.atom(i)) > r) acc.add(mu.weight(i) * psi(mu.atom(i)));
  }
  return acc.value();
}

nlohmann::json to_json(const DiscreteMeasure& mu) {
  return nlohmann::json{{"dim", mu.dim()}, {"atoms", mu.atoms()}, {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    auto atoms = j.at("atoms").get<std::vector<Point>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    return DiscreteMeasure(dim, std::move(atoms), std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("measure JSON: ") + e.what());
  }
}

void write_csv(std::ostream& os, const DiscreteMeasure& mu) {
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < mu.dim(); ++k) os << "x_" << (k + 1) << ',';
  os << "w\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.atom(i)) os << c << ',';
    os << mu.weight(i) << '\n';
  }
  os.precision(old);
}

nlohmann::json to_json(const ParticleConfig& config) {
  return nlohmann::json{{"dim", config.dim}, {"points", config.points}};
}

}  // namespace gibbslab
