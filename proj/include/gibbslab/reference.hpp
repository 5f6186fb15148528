#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gibbslab/core.hpp"

namespace gibbslab {

/// Axis-aligned box [lo, hi] in R^d.
struct Box {
  Point lo;
  Point hi;
  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
};

/// The sigma-finite reference measure of the Gibbs law. Either a finite
/// list of atoms with positive (not necessarily normalized) weights, used for
/// exact enumeration, or a density against Lebesgue measure on R^d or on a
/// box, used for Metropolis sampling.
class ReferenceMeasure {
 public:
  using LogDensity = std::function<double(std::span<const double>)>;
  using Potential = std::function<double(std::span<const double>)>;

  static ReferenceMeasure finite(std::size_t dim, std::vector<Point> atoms,
                                 std::vector<double> weights);
  static ReferenceMeasure lebesgue(std::size_t dim);
  static ReferenceMeasure lebesgue_box(Box box);
  static ReferenceMeasure density(std::size_t dim, LogDensity log_density,
                                  std::optional<Box> box = std::nullopt);

  bool is_finite() const { return finite_; }
  std::size_t dim() const { return dim_; }

  // Finite mode.
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  /// Weight of the atom equal to x (0 when x is not an atom).
  double weight_at(std::span<const double> x) const;

  // Density mode.
  const std::optional<Box>& box() const { return box_; }
  /// log of the density w.r.t. Lebesgue measure; -inf outside the domain.
  double log_density(std::span<const double> x) const;

  /// log of the integral of exp(-U) against this measure. Exact for finite
  /// atoms; composite Gauss-Legendre quadrature on the box otherwise.
  double log_integral_exp_neg(const Potential& u) const;

 private:
  bool finite_ = true;
  std::size_t dim_ = 1;
  std::vector<Point> atoms_;
  std::vector<double> weights_;
  std::optional<Box> box_;
  LogDensity log_density_;
};

}  // namespace gibbslab
