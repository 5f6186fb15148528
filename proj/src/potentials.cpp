#include "gibbslab/potentials.hpp"

#include <cmath>

namespace gibbslab {

double PotentialPair::confinement(std::span<const double> x) const {
  return checked_value(confinement_fn(x), "V", x);
}

double PotentialPair::interaction(std::span<const double> x, std::span<const double> y) const {
  return checked_value(interaction_fn(x, y), "W", x, y);
}

namespace potentials {

ConfinementFn zero_confinement() {
  return [](std::span<const double>) { return 0.0; };
}

InteractionFn zero_interaction() {
  return [](std::span<const double>, std::span<const double>) { return 0.0; };
}

ConfinementFn constant_confinement(double c) {
  return [c](std::span<const double>) { return c; };
}

ConfinementFn power_confinement(double p) {
  if (!(p > 1.0)) throw InvalidArgument("power_confinement: p must be > 1");
  return [p](std::span<const double> x) {
    if (p == 2.0) {
      double s = 0.0;
      for (double c : x) s += c * c;
      return s;
    }
    return std::pow(norm(x), p);
  };
}

ConfinementFn hard_wall(Box box) {
  return [box = std::move(box)](std::span<const double> x) { return box.contains(x) ? 0.0 : kInf; };
}

InteractionFn coulomb_kernel(std::size_t d) {
  if (d == 0) throw InvalidArgument("coulomb_kernel: d must be >= 1");
  if (d == 1) {
    return [](std::span<const double> x, std::span<const double> y) { return -std::abs(x[0] - y[0]); };
  }
  if (d == 2) return log_kernel();
  const double power = static_cast<double>(d) - 2.0;
  return [power](std::span<const double> x, std::span<const double> y) {
    const double r = distance(x, y);
    if (r == 0.0) return kInf;
    return power == 1.0 ? 1.0 / r : std::pow(r, -power);
  };
}

InteractionFn log_kernel() {
  return [](std::span<const double> x, std::span<const double> y) {
    const double r = distance(x, y);
    if (r == 0.0) return kInf;
    return -std::log(r);
  };
}

InteractionFn squared_distance() {
  return [](std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return s;
  };
}

InteractionFn constant_interaction(double c) {
  return [c](std::span<const double>, std::span<const double>) { return c; };
}

Region Region::box(Point lo, Point hi) {
  if (lo.size() != hi.size() || lo.empty()) throw InvalidArgument("Region::box: bad bounds");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] <= hi[k])) throw InvalidArgument("Region::box: lo > hi");
  }
  Region r;
  r.shape = Shape::kBox;
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  return r;
}

Region Region::ball(Point center, double radius) {
  if (center.empty() || !(radius >= 0.0)) throw InvalidArgument("Region::ball: bad parameters");
  Region r;
  r.shape = Shape::kBall;
  r.center = std::move(center);
  r.radius = radius;
  return r;
}

std::size_t Region::dim() const { return shape == Shape::kBox ? lo.size() : center.size(); }

bool Region::in_open(std::span<const double> x) const {
  if (shape == Shape::kBox) {
    for (std::size_t k = 0; k < lo.size(); ++k) {
      if (!(x[k] > lo[k] && x[k] < hi[k])) return false;
    }
    return true;
  }
  return distance(x, center) < radius;
}

bool Region::in_closed(std::span<const double> x) const {
  if (shape == Shape::kBox) {
    for (std::size_t k = 0; k < lo.size(); ++k) {
      if (x[k] < lo[k] || x[k] > hi[k]) return false;
    }
    return true;
  }
  return distance(x, center) <= radius;
}

bool Region::in_exterior(std::span<const double> x) const { return !in_closed(x); }

InteractionFn masked_interaction(MaskKind kind, InteractionFn h, Region region,
                                 int segment_samples) {
  switch (kind) {
    case MaskKind::kW1:
      return [h = std::move(h), region = std::move(region)](std::span<const double> x,
                                                            std::span<const double> y) {
        return region.in_open(x) && region.in_open(y) ? h(x, y) : 0.0;
      };
    case MaskKind::kW2:
      return [h = std::move(h), region = std::move(region)](std::span<const double> x,
                                                            std::span<const double> y) {
        const bool inside = region.in_open(x) && region.in_open(y);
        const bool outside = region.in_exterior(x) && region.in_exterior(y);
        return inside || outside ? h(x, y) : 0.0;
      };
    case MaskKind::kW3: {
      if (segment_samples < 2) throw InvalidArgument("masked_interaction: need >= 2 segment samples");
      return [h = std::move(h), region = std::move(region), segment_samples](
                 std::span<const double> x, std::span<const double> y) {
        Point z(x.size());
        for (int k = 0; k < segment_samples; ++k) {
          const double t = static_cast<double>(k) / static_cast<double>(segment_samples - 1);
          for (std::size_t c = 0; c < x.size(); ++c) z[c] = x[c] + t * (y[c] - x[c]);
          if (region.in_closed(z)) return 0.0;
        }
        return h(x, y);
      };
    }
  }
  throw InvalidArgument("masked_interaction: unsupported kind");
}

double log_normalizer(const PotentialPair& pair, const ReferenceMeasure& ell) {
  return ell.log_integral_exp_neg([&](std::span<const double> x) { return pair.confinement(x); });
}

PotentialPair normalize_pair(std::size_t dim, ConfinementFn v1, ConfinementFn v2,
                             InteractionFn w, const ReferenceMeasure& ell) {
  if (ell.dim() != dim) throw InvalidArgument("normalize_pair: reference dimension mismatch");
  const double log_z2 = ell.log_integral_exp_neg(
      [&](std::span<const double> x) { return checked_value(v2(x), "V2", x); });
  if (!std::isfinite(log_z2)) {
    throw NumericalError("normalize_pair: normalizer int e^{-V2} dl is zero or infinite");
  }
  PotentialPair pair;
  pair.dim = dim;
  pair.confinement_fn = [v2, log_z2](std::span<const double> x) { return v2(x) + log_z2; };
  pair.interaction_fn = [w, v1, log_z2](std::span<const double> x, std::span<const double> y) {
    const double a = checked_value(w(x, y), "W~", x, y);
    const double b = checked_value(v1(x), "V1", x);
    const double c = checked_value(v1(y), "V1", y);
    return a + b + c - log_z2;
  };
  pair.name = "normalized";
  return pair;
}

}  // namespace potentials
}  // namespace gibbslab
