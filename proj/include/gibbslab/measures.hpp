#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/core.hpp"

namespace gibbslab {

/// Finitely supported probability measure on R^d.
///
/// Atoms are kept in lexicographic order; coincident atoms are merged by
/// summing their weights, and weights below 1e-15 after merging are dropped
/// with the remainder renormalized. Two measures are equal iff they have the
/// same atoms and weights, so all metrics may assume distinct atoms.
class DiscreteMeasure {
 public:
  /// Input weights must be non-negative and sum to 1 within 1e-9.
  DiscreteMeasure(std::size_t dim, std::vector<Point> atoms, std::vector<double> weights);

  static DiscreteMeasure dirac(Point x);
  static DiscreteMeasure uniform(std::size_t dim, std::vector<Point> atoms);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Weight carried by the atom exactly equal to x (0 if absent).
  double mass_at(std::span<const double> x) const;

  /// Index of the atom equal to x, or size() when absent.
  std::size_t find(std::span<const double> x) const;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.dim_ == b.dim_ && a.atoms_ == b.atoms_ && a.weights_ == b.weights_;
  }

 private:
  std::size_t dim_;
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

/// Ordered n-tuple of points in R^d.
struct ParticleConfig {
  std::size_t dim = 1;
  std::vector<Point> points;

  ParticleConfig() = default;
  ParticleConfig(std::size_t d, std::vector<Point> pts);
  std::size_t size() const { return points.size(); }
};

/// Positive continuous weight psi on R^d used by the d_psi metric.
class WeightFunction {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  WeightFunction(std::string name, Fn fn, bool growth_condition);

  /// psi(x) = ||x||^q, q > 0.
  static WeightFunction norm_power(double q);
  /// psi(x) = 1 + ||x||.
  static WeightFunction one_plus_norm();

  double operator()(std::span<const double> x) const;
  const std::string& name() const { return name_; }
  bool growth_condition() const { return growth_; }

 private:
  std::string name_;
  Fn fn_;
  bool growth_;
};

DiscreteMeasure empirical_measure(const ParticleConfig& config);

enum class BlMethod { kAuto, kLinearProgram, kNetworkFlow };

/// Bounded-Lipschitz distance with ||f||_BL = max(Lip(f), 2 sup|f|).
/// kLinearProgram maximizes over function values on the union support;
/// kNetworkFlow solves the equivalent transport problem with cost
/// min(|x - y|, 1). kAuto uses the LP for small supports.
double d_bl(const DiscreteMeasure& mu, const DiscreteMeasure& nu, BlMethod method = BlMethod::kAuto);

/// d_bl(mu, nu) + |psi_integral(mu) - psi_integral(nu)|. The bounded-Lipschitz
/// metric stands in for the Levy-Prohorov metric of the weak topology.
double d_psi(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const WeightFunction& psi);

enum class TransportMethod { kAuto, kQuantile, kLinearProgram, kNetworkFlow };

/// Optimal transport cost inf over couplings of sum |x - y|^p. Note that this
/// is the raw cost, not its p-th root.
double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     TransportMethod method = TransportMethod::kAuto);

double psi_integral(const DiscreteMeasure& mu, const WeightFunction& psi);

/// Sum of w_i psi(a_i) over atoms with ||a_i|| > r.
double tail_psi_mass(const DiscreteMeasure& mu, const WeightFunction& psi, double r);

// Serialization: {"dim": d, "atoms": [[...], ...], "weights": [...]}
nlohmann::json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);
/// CSV with header x_1,...,x_d,w and 17 significant digits.
void write_csv(std::ostream& os, const DiscreteMeasure& mu);

nlohmann::json to_json(const ParticleConfig& config);

}  // namespace gibbslab
