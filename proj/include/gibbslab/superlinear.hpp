#pragma once

#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "gibbslab/measures.hpp"

namespace gibbslab {

/// Convex, non-decreasing piecewise-linear function on [0, inf):
///   phi(s) = M_1                          for s in [0, M_1],
///   phi(s) = phi(M_k) + k (s - M_k)       for s in [M_k, M_{k+1}],
/// with slope K past the last breakpoint. Slopes 0, 1, ..., K.
class SuperlinearFunction {
 public:
  explicit SuperlinearFunction(std::vector<double> breakpoints);

  double operator()(double s) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t max_slope() const { return breakpoints_.size(); }
  /// phi(M_k), k = 1..K.
  const std::vector<double>& knot_values() const { return knot_values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> knot_values_;
};

nlohmann::json to_json(const SuperlinearFunction& phi);

using ScalarField = std::function<double(std::span<const double>)>;

/// Breakpoints M_1 <= ... <= M_K such that the exponential tails
/// int_{psi >= M_k} e^{k psi} dnu are below 2^-k. Each M_k is the smallest
/// support value of psi achieving this, or a point just above max psi when
/// only the empty tail qualifies. psi must be non-negative on supp(nu).
SuperlinearFunction construct_phi(const DiscreteMeasure& nu, const ScalarField& psi_bar,
                                  std::size_t max_slope);

struct PhiMomentReport {
  double integral = 0.0;  // int e^{phi(psi)} dnu
  double bound = 0.0;     // e^{M_1} + sum_{k <= K} 2^-k
  bool holds() const { return integral <= bound; }
};

PhiMomentReport phi_moment_check(const SuperlinearFunction& phi, const DiscreteMeasure& nu,
                                 const ScalarField& psi_bar);

}  // namespace gibbslab
