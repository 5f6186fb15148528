#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "gibbslab/core.hpp"
#include "gibbslab/reference.hpp"

namespace gibbslab {

using ConfinementFn = std::function<double(std::span<const double>)>;
using InteractionFn = std::function<double(std::span<const double>, std::span<const double>)>;

/// Confining potential and pair interaction over (-inf, +inf], together with
/// the constants a caller declares for the lower-bound assumptions.
///
/// +inf is a legal value (hard walls, singular kernels). NaN and -inf are
/// rejected on evaluation with the offending point(s) in the message.
struct PotentialPair {
  std::size_t dim = 1;
  ConfinementFn confinement_fn;
  InteractionFn interaction_fn;
  bool symmetric = true;
  std::optional<double> lower_bound_c;  // inf W > c
  std::optional<double> eps1;           // inf [W + eps1 (V(x) + V(y))] > c1_bound
  std::optional<double> c1_bound;
  std::string name;

  double confinement(std::span<const double> x) const;
  double interaction(std::span<const double> x, std::span<const double> y) const;
};

namespace potentials {

ConfinementFn zero_confinement();
InteractionFn zero_interaction();
ConfinementFn constant_confinement(double c);

/// V(x) = ||x||^p, p > 1.
ConfinementFn power_confinement(double p);

/// V = 0 inside the box, +inf outside.
ConfinementFn hard_wall(Box box);

/// W(x, y) = K(x - y) with K(z) = -|z| (d = 1), -log||z|| (d = 2),
/// ||z||^(2-d) (d > 2). The d = 1 kernel vanishes on the diagonal, the
/// others are +inf there.
InteractionFn coulomb_kernel(std::size_t d);

/// W(x, y) = -log||x - y|| in any dimension (the log-gas kernel).
InteractionFn log_kernel();

/// W(x, y) = ||x - y||^2.
InteractionFn squared_distance();

InteractionFn constant_interaction(double c);

/// Box or ball; `open` membership excludes the boundary.
struct Region {
  enum class Shape { kBox, kBall };
  Shape shape = Shape::kBox;
  Point lo, hi;        // box
  Point center;        // ball
  double radius = 0.0;

  static Region box(Point lo, Point hi);
  static Region ball(Point center, double radius);

  std::size_t dim() const;
  bool in_open(std::span<const double> x) const;      // interior
  bool in_closed(std::span<const double> x) const;    // closure
  bool in_exterior(std::span<const double> x) const;  // interior of the complement
};

enum class MaskKind { kW1, kW2, kW3 };

/// Discontinuous interactions built from a continuous h >= 0:
///   W1 = h on O x O, else 0;
///   W2 = h when both points lie in O or both in the interior of O^c;
///   W3 = h when the segment [x, y] misses the closed set K = region.
/// The W3 visibility test samples `segment_samples` equispaced points.
InteractionFn masked_interaction(MaskKind kind, InteractionFn h, Region region,
                                 int segment_samples = 1000);

/// The normalized pair equivalent to (V1 + V2, W~):
///   V = V2 + log Z2,  W = W~ + V1(x) + V1(y) - log Z2,  Z2 = int e^{-V2} dl.
/// Throws NumericalError when Z2 is zero or infinite.
PotentialPair normalize_pair(std::size_t dim, ConfinementFn v1, ConfinementFn v2,
                             InteractionFn w, const ReferenceMeasure& ell);

/// log int e^{-V} dl for the confinement of a pair.
double log_normalizer(const PotentialPair& pair, const ReferenceMeasure& ell);

}  // namespace potentials
}  // namespace gibbslab
