#pragma once

#include <cstddef>
#include <vector>

namespace gibbslab::detail {

/// Uncapacitated transshipment with real-valued supplies, solved by
/// successive shortest paths with Johnson potentials. Edge costs must be
/// non-negative. Supplies must sum to zero (within rounding).
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes);

  void add_edge(std::size_t from, std::size_t to, double cost);
  void set_supply(std::size_t node, double supply);

  /// Returns the minimum total cost of routing all supply to demand.
  double solve();

 private:
  struct Edge {
    std::size_t to;
    double cap;
    double cost;
    std::size_t rev;
  };
  void add_arc(std::size_t from, std::size_t to, double cap, double cost);

  std::size_t n_;
  std::vector<double> supply_;
  std::vector<std::vector<Edge>> graph_;
};

}  // namespace gibbslab::detail
