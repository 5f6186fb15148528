#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/potentials.hpp"

namespace gibbslab::assumptions {

/// Where a sampled check looks: a regular grid or a seeded uniform cloud in
/// a box. Pair checks use every ordered pair of probe points.
struct ProbePlan {
  enum class Kind { kGrid, kRandom };
  Kind kind = Kind::kGrid;
  Box box;
  std::size_t points_per_axis = 21;  // grid
  std::size_t count = 200;           // random
  std::uint64_t seed = 0;

  static ProbePlan grid(Box box, std::size_t points_per_axis);
  static ProbePlan random(Box box, std::size_t count, std::uint64_t seed);

  std::vector<Point> points() const;
  std::string describe() const;
};

struct Violation {
  Point x;
  Point y;  // empty for single-point checks
  double value = 0.0;
};

/// Result of a sampled check. `exhaustive` is always false: the assumptions
/// quantify over all of R^d, the probe only over finitely many points.
struct CheckReport {
  std::string assumption;
  std::string probe;
  std::size_t evaluations = 0;
  double lower_bound_estimate = kInf;  // sampled infimum of the checked quantity
  std::optional<double> declared_bound;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // first few only
  bool exhaustive = false;
  bool passed() const { return violation_count == 0; }
};

nlohmann::json to_json(const CheckReport& report);

/// inf W > c: sampled minimum of W and pairs with W < declared c.
CheckReport check_B1(const PotentialPair& pair, const ProbePlan& probe,
                     std::optional<double> declared_c = std::nullopt);

/// inf V > c' and inf [W + eps1 (V(x) + V(y))] > c. Reports the sampled
/// minimum of the coupled quantity; the sampled min of V goes into a second
/// report entry through `confinement_min`.
struct C1Report {
  CheckReport coupled;
  double confinement_min = kInf;
};
C1Report check_C1(const PotentialPair& pair, double eps1, const ProbePlan& probe,
                  std::optional<double> declared_c = std::nullopt);

/// V(x) + V(y) + W(x, y) >= gamma(||x||) + gamma(||y||) on the probe.
CheckReport check_C2(const PotentialPair& pair, const std::function<double(double)>& gamma,
                     const ProbePlan& probe);

/// |int e^{-V} dl - 1| for the pair; the report's estimate is the mass.
struct A2Report {
  double mass = 0.0;
  double deviation = 0.0;
  bool passed(double tol = 1e-10) const { return deviation <= tol; }
};
A2Report check_A2(const PotentialPair& pair, const ReferenceMeasure& ell);

/// Equivalent-pair conditions: int e^{-V2} dl < inf and
/// inf [W~ + V1(x) + V1(y)] > c~ on the probe.
struct DReport {
  double log_normalizer = 0.0;
  bool integrable = false;
  CheckReport coupled;
};
DReport check_D(const ConfinementFn& v1, const ConfinementFn& v2, const InteractionFn& w,
                const ReferenceMeasure& ell, const ProbePlan& probe,
                std::optional<double> declared_c = std::nullopt);

}  // namespace gibbslab::assumptions
