#include "gibbslab/superlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace gibbslab {

SuperlinearFunction::SuperlinearFunction(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw InvalidArgument("SuperlinearFunction: need at least one breakpoint");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > 0.0) || !std::isfinite(breakpoints_[k])) {
      throw InvalidArgument("SuperlinearFunction: breakpoints must be positive and finite");
    }
    if (k > 0 && breakpoints_[k] < breakpoints_[k - 1]) {
      throw InvalidArgument("SuperlinearFunction: breakpoints must be non-decreasing");
    }
  }
  knot_values_.resize(breakpoints_.size());
  knot_values_[0] = breakpoints_[0];
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    knot_values_[k] = knot_values_[k - 1] + static_cast<double>(k) * (breakpoints_[k] - breakpoints_[k - 1]);
  }
}

double SuperlinearFunction::operator()(double s) const {
  if (!(s >= 0.0)) throw InvalidArgument("SuperlinearFunction: argument must be >= 0");
  if (s <= breakpoints_[0]) return breakpoints_[0];
  // Last k (1-based) with M_k <= s.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
  return knot_values_[k - 1] + static_cast<double>(k) * (s - breakpoints_[k - 1]);
}

nlohmann::json to_json(const SuperlinearFunction& phi) {
  return nlohmann::json{{"breakpoints", phi.breakpoints()},
                        {"knot_values", phi.knot_values()},
                        {"max_slope", phi.max_slope()}};
}

SuperlinearFunction construct_phi(const DiscreteMeasure& nu, const ScalarField& psi_bar,
                                  std::size_t max_slope) {
  if (max_slope < 1) throw InvalidArgument("construct_phi: K must be >= 1");
  const std::size_t m = nu.size();
  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = psi_bar(nu.atom(i));
    if (!(s[i] >= 0.0) || !std::isfinite(s[i])) {
      throw InvalidArgument("construct_phi: psi_bar must be finite and non-negative on the support");
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  const double top = s[order.back()];
  // Strictly above every support value; the tail beyond it is empty.
  const double past_top = std::max(std::nextafter(top, kInf), std::nextafter(0.0, 1.0));

  std::vector<double> breakpoints;
  for (std::size_t k = 1; k <= max_slope; ++k) {
    const double target = std::ldexp(1.0, -static_cast<int>(k));
    double chosen = past_top;
    // tail(i) = sum over sorted positions >= i, built from the top down so
    // that equal psi values enter together.
    double tail = 0.0;
    std::size_t pos = m;
    while (pos > 0) {
      std::size_t start = pos - 1;
      const double value = s[order[start]];
      while (start > 0 && s[order[start - 1]] == value) --start;
      double block = 0.0;
      for (std::size_t q = start; q < pos; ++q) {
        block += nu.weight(order[q]) * std::exp(static_cast<double>(k) * s[order[q]]);
      }
      if (tail + block < target && value > 0.0) {
        tail += block;
        chosen = value;
        pos = start;
      } else {
        break;
      }
    }
    if (!breakpoints.empty()) chosen = std::max(chosen, breakpoints.back());
    breakpoints.push_back(chosen);
  }
  return SuperlinearFunction(std::move(breakpoints));
}

PhiMomentReport phi_moment_check(const SuperlinearFunction& phi, const DiscreteMeasure& nu,
                                 const ScalarField& psi_bar) {
  PhiMomentReport r;
  CompensatedSum integral;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    integral.add(nu.weight(i) * std::exp(phi(psi_bar(nu.atom(i)))));
  }
  r.integral = integral.value();
  double tails = 0.0;
  for (std::size_t k = 1; k <= phi.max_slope(); ++k) tails += std::ldexp(1.0, -static_cast<int>(k));
  r.bound = std::exp(phi.breakpoints().front()) + tails;
  return r;
}

}  // namespace gibbslab
