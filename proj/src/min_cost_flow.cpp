#include "gibbslab/detail/min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "gibbslab/core.hpp"

namespace gibbslab::detail {

MinCostFlow::MinCostFlow(std::size_t nodes)
    : n_(nodes), supply_(nodes, 0.0), graph_(nodes + 2) {}

void MinCostFlow::add_arc(std::size_t from, std::size_t to, double cap, double cost) {
  graph_[from].push_back({to, cap, cost, graph_[to].size()});
  graph_[to].push_back({from, 0.0, -cost, graph_[from].size() - 1});
}

void MinCostFlow::add_edge(std::size_t from, std::size_t to, double cost) {
  if (cost < 0) throw InvalidArgument("MinCostFlow: negative edge cost");
  add_arc(from, to, kInf, cost);
}

void MinCostFlow::set_supply(std::size_t node, double supply) { supply_[node] = supply; }

double MinCostFlow::solve() {
  const std::size_t source = n_;
  const std::size_t sink = n_ + 1;
  double total = 0.0, demand = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (supply_[i] > 0) {
      add_arc(source, i, supply_[i], 0.0);
      total += supply_[i];
    } else if (supply_[i] < 0) {
      add_arc(i, sink, -supply_[i], 0.0);
      demand -= supply_[i];
    }
  }
  // Weights that sum to one only up to rounding leave a residue on one side.
  total = std::min(total, demand);
  const std::size_t nodes = n_ + 2;
  std::vector<double> pot(nodes, 0.0);
  std::vector<double> dist(nodes);
  std::vector<std::size_t> prev_node(nodes), prev_edge(nodes);
  const double tiny = 1e-13 * std::max(1.0, total);

  double pushed = 0.0;
  for (std::size_t iter = 0; pushed < total - tiny; ++iter) {
    if (iter > 100 * nodes * nodes + 1000) throw NumericalError("MinCostFlow: no convergence");
    std::fill(dist.begin(), dist.end(), kInf);
    dist[source] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, source});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (std::size_t k = 0; k < graph_[u].size(); ++k) {
        const Edge& e = graph_[u][k];
        if (e.cap <= tiny) continue;
        const double rc = std::max(0.0, e.cost + pot[u] - pot[e.to]);
        if (dist[u] + rc < dist[e.to]) {
          dist[e.to] = dist[u] + rc;
          prev_node[e.to] = u;
          prev_edge[e.to] = k;
          pq.push({dist[e.to], e.to});
        }
      }
    }
    if (dist[sink] == kInf) throw NumericalError("MinCostFlow: supplies cannot be routed");
    for (std::size_t v = 0; v < nodes; ++v) {
      if (dist[v] < kInf) pot[v] += dist[v];
    }
    double amount = total - pushed;
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      amount = std::min(amount, graph_[prev_node[v]][prev_edge[v]].cap);
    }
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& e = graph_[prev_node[v]][prev_edge[v]];
      if (e.cap != kInf) e.cap -= amount;
      graph_[v][e.rev].cap += amount;
    }
    pushed += amount;
  }

  double cost = 0.0;
  for (std::size_t u = 0; u < n_; ++u) {
    for (const Edge& e : graph_[u]) {
      if (e.cap == kInf && e.to < n_) {
        const double flow = graph_[e.to][e.rev].cap;
        cost += flow * e.cost;
      }
    }
  }
  return cost;
}

}  // namespace gibbslab::detail
