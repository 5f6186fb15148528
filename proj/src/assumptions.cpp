#include "gibbslab/assumptions.hpp"

#include <sstream>

#include <json.hpp>

#include "gibbslab/random.hpp"

namespace gibbslab::assumptions {
namespace {

constexpr std::size_t kMaxListed = 20;

void record(CheckReport& r, const Point& x, const Point& y, double v) {
  ++r.violation_count;
  if (r.violations.size() < kMaxListed) r.violations.push_back({x, y, v});
}

// Scans every ordered pair of probe points, tracking min of `f` and values
// below `bound`.
template <class F>
CheckReport scan_pairs(const char* name, const ProbePlan& probe, std::optional<double> bound, F&& f) {
  CheckReport r;
  r.assumption = name;
  r.probe = probe.describe();
  r.declared_bound = bound;
  const auto pts = probe.points();
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      const double v = f(x, y);
      ++r.evaluations;
      r.lower_bound_estimate = std::min(r.lower_bound_estimate, v);
      if (bound && v < *bound) record(r, x, y, v);
    }
  }
  return r;
}

}  // namespace

ProbePlan ProbePlan::grid(Box box, std::size_t points_per_axis) {
  if (points_per_axis < 2) throw InvalidArgument("ProbePlan::grid: need >= 2 points per axis");
  ProbePlan p;
  p.kind = Kind::kGrid;
  p.box = std::move(box);
  p.points_per_axis = points_per_axis;
  return p;
}

ProbePlan ProbePlan::random(Box box, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("ProbePlan::random: count must be positive");
  ProbePlan p;
  p.kind = Kind::kRandom;
  p.box = std::move(box);
  p.count = count;
  p.seed = seed;
  return p;
}

std::vector<Point> ProbePlan::points() const {
  const std::size_t d = box.dim();
  if (d == 0) throw InvalidArgument("ProbePlan: empty box");
  std::vector<Point> out;
  if (kind == Kind::kRandom) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
      Point x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
      out.push_back(std::move(x));
    }
    return out;
  }
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    Point x(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double t = static_cast<double>(idx[k]) / static_cast<double>(points_per_axis - 1);
      x[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
    }
    out.push_back(std::move(x));
    std::size_t k = d;
    while (k > 0 && ++idx[k - 1] == points_per_axis) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::string ProbePlan::describe() const {
  std::ostringstream os;
  os << (kind == Kind::kGrid ? "grid" : "random") << " box=" << format_point(box.lo) << "-"
     << format_point(box.hi);
  if (kind == Kind::kGrid) {
    os << " points_per_axis=" << points_per_axis;
  } else {
    os << " count=" << count << " seed=" << seed;
  }
  return os.str();
}

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& viol : report.violations) {
    v.push_back({{"x", viol.x}, {"y", viol.y}, {"value", viol.value}});
  }
  nlohmann::json j{{"assumption", report.assumption},
                   {"probe", report.probe},
                   {"evaluations", report.evaluations},
                   {"lower_bound_estimate", report.lower_bound_estimate},
                   {"violation_count", report.violation_count},
                   {"violations", v},
                   {"exhaustive", report.exhaustive},
                   {"passed", report.passed()}};
  j["declared_bound"] = report.declared_bound ? nlohmann::json(*report.declared_bound) : nlohmann::json();
  return j;
}

CheckReport check_B1(const PotentialPair& pair, const ProbePlan& probe, std::optional<double> declared_c) {
  if (!declared_c) declared_c = pair.lower_bound_c;
  return scan_pairs("B1", probe, declared_c,
                    [&](const Point& x, const Point& y) { return pair.interaction(x, y); });
}

C1Report check_C1(const PotentialPair& pair, double eps1, const ProbePlan& probe,
                  std::optional<double> declared_c) {
  if (!(eps1 > 0.0 && eps1 < 1.0)) throw InvalidArgument("check_C1: eps1 must lie in (0, 1)");
  if (!declared_c) declared_c = pair.c1_bound;
  C1Report out;
  for (const auto& x : probe.points()) out.confinement_min = std::min(out.confinement_min, pair.confinement(x));
  out.coupled = scan_pairs("C1", probe, declared_c, [&](const Point& x, const Point& y) {
    const double w = pair.interaction(x, y);
    const double v = pair.confinement(x) + pair.confinement(y);
    return checked_value(w + eps1 * v, "W + eps1 (V + V)", x, y);
  });
  return out;
}

CheckReport check_C2(const PotentialPair& pair, const std::function<double(double)>& gamma,
                     const ProbePlan& probe) {
  CheckReport r = scan_pairs("C2", probe, 0.0, [&](const Point& x, const Point& y) {
    const double lhs = pair.confinement(x) + pair.confinement(y) + pair.interaction(x, y);
    const double rhs = gamma(norm(x)) + gamma(norm(y));
    if (lhs == kInf) return kInf;
    return checked_value(lhs - rhs, "V + V + W - gamma - gamma", x, y);
  });
  return r;
}

A2Report check_A2(const PotentialPair& pair, const ReferenceMeasure& ell) {
  A2Report r;
  r.mass = std::exp(potentials::log_normalizer(pair, ell));
  r.deviation = std::abs(r.mass - 1.0);
  return r;
}

DReport check_D(const ConfinementFn& v1, const ConfinementFn& v2, const InteractionFn& w,
                const ReferenceMeasure& ell, const ProbePlan& probe, std::optional<double> declared_c) {
  DReport r;
  r.log_normalizer = ell.log_integral_exp_neg(
      [&](std::span<const double> x) { return checked_value(v2(x), "V2", x); });
  r.integrable = std::isfinite(r.log_normalizer);
  r.coupled = scan_pairs("D", probe, declared_c, [&](const Point& x, const Point& y) {
    const double a = checked_value(w(x, y), "W~", x, y);
    return a + checked_value(v1(x), "V1", x) + checked_value(v1(y), "V1", y);
  });
  return r;
}

}  // namespace gibbslab::assumptions
