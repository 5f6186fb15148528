#pragma once

#include <vector>

namespace gibbslab::detail {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coeffs;  // dense, one entry per variable
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// maximize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double value = 0.0;
  std::vector<double> x;
};

/// Dense two-phase tableau simplex with Bland's rule. Intended for the small
/// problems of the metric code (tens of variables, a few hundred rows).
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace gibbslab::detail
