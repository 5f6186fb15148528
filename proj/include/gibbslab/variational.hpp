#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"
#include "gibbslab/test_functional.hpp"

namespace gibbslab {

/// Finite node set on which measures are discretized.
struct GridSpec {
  std::size_t dim = 1;
  std::vector<Point> nodes;
  double step = 0.0;  // 0 for explicit node lists

  /// Nodes lo + k h per axis up to hi (inclusive within h/1000), row-major
  /// with the last axis fastest. Throws if more than `cap` nodes.
  static GridSpec box(Point lo, Point hi, double h, std::size_t cap = 200000);
  static GridSpec explicit_nodes(std::size_t dim, std::vector<Point> nodes);
  /// Nodes of a finite reference.
  static GridSpec from_reference(const ReferenceMeasure& ell);

  std::size_t size() const { return nodes.size(); }
  /// step, or the smallest distance between two nodes for explicit lists.
  double spacing() const;
};

nlohmann::json to_json(const GridSpec& grid);

struct VariationalOptions {
  double tol = 1e-8;
  std::size_t max_iter = 200000;
  std::size_t starts = 5;
  std::uint64_t seed = 0;
  std::optional<TestFunctional> tilt;
  unsigned threads = 1;
};

/// Replacement of +inf diagonal kernel entries by the kernel at distance
/// h/2 (a self-energy for the mass carried by one node).
struct DiagonalSurrogate {
  bool applied = false;
  double h = 0.0;
  std::vector<double> diagonal;  // per feasible node, after replacement
};

struct MinimizationResult {
  DiscreteMeasure minimizer = DiscreteMeasure::dirac({0.0});
  std::vector<Point> nodes;     // feasible nodes
  std::vector<double> weights;  // full weight vector on `nodes`
  double value = 0.0;           // objective = rate + tilt
  double rate_value = 0.0;
  double tilt_value = 0.0;
  std::size_t iterations = 0;
  double convergence_gap = 0.0;
  bool converged = false;
  std::string method;
  /// True unless the kernel is certified conditionally positive
  /// semidefinite on the grid and the tilt is linear, making the problem
  /// convex.
  bool local = true;
  std::vector<std::uint64_t> seeds;
  std::vector<double> start_values;
  std::size_t best_start = 0;
  DiagonalSurrogate surrogate;
  std::vector<double> objective_trace;  // best start, per accepted iteration
};

nlohmann::json to_json(const MinimizationResult& r);

/// inf over grid measures of R(mu | nu) + W(mu) + f(mu), nu = normalized
/// e^{-V} l on the grid. For a finite l, nodes must be atoms of l (others are
/// infeasible); for a density l, nu_i is proportional to dl/dx e^{-V} at
/// node i. Entropic mirror descent with Armijo backtracking.
MinimizationResult minimize_I(const PotentialPair& pair, const ReferenceMeasure& ell, const GridSpec& grid,
                              const VariationalOptions& opts = {});

/// inf over grid measures of int V dmu + W(mu) + f(mu) by away-step
/// Frank-Wolfe. Nodes with V = +inf are infeasible.
MinimizationResult minimize_J(const PotentialPair& pair, const GridSpec& grid, const VariationalOptions& opts = {});

/// Smallest eigenvalue of the symmetrized kernel restricted to zero-sum
/// vectors on the nodes (conditional positive semidefiniteness test).
double conditional_min_eigenvalue(const PotentialPair& pair, const std::vector<Point>& nodes,
                                  const DiagonalSurrogate& surrogate);

/// Kernel diagonal with +inf entries replaced as in DiagonalSurrogate.
DiagonalSurrogate diagonal_surrogate(const PotentialPair& pair, const std::vector<Point>& nodes, double h);

using WeightObjective = std::function<double(std::span<const double>)>;

/// Exhaustive scan of the lattice {w : w_i = k_i step, sum w = 1} for at
/// most 4 nodes. The argmin is the first minimizer in lexicographic order of
/// (k_0, k_1, ...). Throws BudgetExceeded past `budget` lattice points.
MinimizationResult simplex_scan_oracle(std::size_t dim, const std::vector<Point>& nodes,
                                       const WeightObjective& objective, double step,
                                       std::uint64_t budget = 10'000'000);

/// Objectives for the oracle, evaluated through the functionals module on
/// the measure with the given weights on `nodes` (zero weights dropped).
WeightObjective rate_I_objective(const PotentialPair& pair, const ReferenceMeasure& ell,
                                 const std::vector<Point>& nodes, std::optional<TestFunctional> tilt = {});
WeightObjective rate_J_objective(const PotentialPair& pair, const std::vector<Point>& nodes,
                                 std::optional<TestFunctional> tilt = {});
/// int V dmu + W_offdiag(mu) + (1/2) sum w_i^2 diag_i + f(mu).
WeightObjective surrogate_J_objective(const PotentialPair& pair, const std::vector<Point>& nodes,
                                      const DiagonalSurrogate& surrogate, std::optional<TestFunctional> tilt = {});

}  // namespace gibbslab
