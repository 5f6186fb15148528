#include "gibbslab/detail/simplex.hpp"

#include <cmath>
#include <limits>

namespace gibbslab::detail {
namespace {

constexpr double kEps = 1e-11;
constexpr int kMaxPivots = 200000;

struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<double> a;  // (rows + 1) x (cols + 1); last row holds reduced costs
  std::vector<int> basis;

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }
  double& rhs(int r) { return at(r, cols); }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }

  // Reduced costs live in row `rows`; maximize. Returns false on unbounded.
  LpStatus run(const std::vector<bool>& allowed) {
    for (int it = 0; it < kMaxPivots; ++it) {
      int enter = -1;
      for (int c = 0; c < cols; ++c) {
        if (allowed[c] && at(rows, c) > kEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        const double v = at(r, enter);
        if (v > kEps) {
          const double ratio = at(r, cols) / v;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
    return LpStatus::kIterationLimit;
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());

  int n_slack = 0;
  int n_art = 0;
  for (const auto& row : lp.rows) {
    Relation rel = row.relation;
    if (row.rhs < 0) {
      rel = rel == Relation::kLessEqual      ? Relation::kGreaterEqual
            : rel == Relation::kGreaterEqual ? Relation::kLessEqual
                                             : Relation::kEqual;
    }
    if (rel != Relation::kEqual) ++n_slack;
    if (rel != Relation::kLessEqual) ++n_art;
  }

  Tableau t;
  t.rows = m;
  t.cols = n + n_slack + n_art;
  t.a.assign(static_cast<std::size_t>(m + 1) * (t.cols + 1), 0.0);
  t.basis.assign(m, -1);
  std::vector<bool> is_art(t.cols, false);

  int next_slack = n;
  int next_art = n + n_slack;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    const double sign = row.rhs < 0 ? -1.0 : 1.0;
    Relation rel = row.relation;
    if (sign < 0) {
      rel = rel == Relation::kLessEqual      ? Relation::kGreaterEqual
            : rel == Relation::kGreaterEqual ? Relation::kLessEqual
                                             : Relation::kEqual;
    }
    for (int c = 0; c < n; ++c) t.at(r, c) = sign * row.coeffs[c];
    t.rhs(r) = sign * row.rhs;
    if (rel == Relation::kLessEqual) {
      t.at(r, next_slack) = 1.0;
      t.basis[r] = next_slack++;
    } else {
      if (rel == Relation::kGreaterEqual) t.at(r, next_slack++) = -1.0;
      t.at(r, next_art) = 1.0;
      is_art[next_art] = true;
      t.basis[r] = next_art++;
    }
  }

  LpSolution sol;
  std::vector<bool> allowed(t.cols, true);

  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    for (int c = 0; c <= t.cols; ++c) {
      double v = (c < t.cols && is_art[c]) ? -1.0 : 0.0;
      for (int r = 0; r < m; ++r) {
        if (is_art[t.basis[r]]) v += t.at(r, c);
      }
      t.at(m, c) = v;
    }
    const LpStatus st = t.run(allowed);
    if (st == LpStatus::kIterationLimit) {
      sol.status = st;
      return sol;
    }
    double infeas = 0.0;
    for (int r = 0; r < m; ++r) {
      if (is_art[t.basis[r]]) infeas += t.rhs(r);
    }
    double scale = 1.0;
    for (const auto& row : lp.rows) scale = std::max(scale, std::abs(row.rhs));
    if (infeas > 1e-9 * scale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (!is_art[t.basis[r]]) continue;
      for (int c = 0; c < t.cols; ++c) {
        if (!is_art[c] && std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          break;
        }
      }
    }
    for (int c = 0; c < t.cols; ++c) allowed[c] = !is_art[c];
  }

  // Phase 2 reduced costs: d_c = c_c - sum_r c_B(r) * T(r, c).
  auto cost = [&](int c) { return c < n ? lp.objective[c] : 0.0; };
  for (int c = 0; c <= t.cols; ++c) {
    double v = c < t.cols ? cost(c) : 0.0;
    for (int r = 0; r < m; ++r) v -= cost(t.basis[r]) * t.at(r, c);
    t.at(m, c) = v;
  }
  const LpStatus st = t.run(allowed);
  sol.status = st;
  if (st != LpStatus::kOptimal) return sol;

  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < n) sol.x[t.basis[r]] = t.rhs(r);
  }
  double value = 0.0;
  for (int c = 0; c < n; ++c) value += lp.objective[c] * sol.x[c];
  sol.value = value;
  return sol;
}

}  // namespace gibbslab::detail
