// Regenerates tests/golden/loggas_equilibrium.json: the energy minimizer of
// the log-gas (V = x^2, W = -log|x - y|) on a fine grid, found by a primal
// active-set solve of the KKT system, then binned onto the coarse grid used
// by the tests.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include "gibbslab/potentials.hpp"
#include "gibbslab/variational.hpp"

using namespace gibbslab;

namespace {

struct QpResult {
  std::vector<double> w;
  double value = 0.0;
  std::size_t iterations = 0;
  double kkt_violation = 0.0;
};

// min (1/2) w'Qw + c'w  s.t.  sum w = 1, w >= 0.
QpResult active_set_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<char> active(static_cast<std::size_t>(n), 1);
  QpResult out;
  for (std::size_t it = 0; it < 100000; ++it) {
    out.iterations = it + 1;
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[static_cast<std::size_t>(i)]) s.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = q(s[a], s[b]);
      kkt(a, k) = 1.0;
      kkt(k, a) = 1.0;
      rhs(a) = -c(s[a]);
    }
    rhs(k) = 1.0;
    const Eigen::VectorXd z = kkt.partialPivLu().solve(rhs);

    double alpha = 1.0;
    Eigen::Index block = -1;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double wa = w(s[a]);
      if (z(a) < 0.0 && wa - z(a) > 0.0) {
        const double t = wa / (wa - z(a));
        if (t < alpha) {
          alpha = t;
          block = s[a];
        }
      }
    }
    for (Eigen::Index a = 0; a < k; ++a) w(s[a]) += alpha * (z(a) - w(s[a]));
    if (block >= 0) {
      w(block) = 0.0;
      active[static_cast<std::size_t>(block)] = 0;
      continue;
    }

    const Eigen::VectorXd g = q * w + c;
    double lambda = 0.0;
    for (Eigen::Index i : s) lambda += g(i);
    lambda /= static_cast<double>(k);
    double worst = 0.0;
    Eigen::Index enter = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[static_cast<std::size_t>(i)]) continue;
      const double d = g(i) - lambda;
      if (d < worst) {
        worst = d;
        enter = i;
      }
    }
    out.kkt_violation = -worst;
    if (enter < 0 || worst > -1e-13 * (1.0 + std::abs(lambda))) break;
    active[static_cast<std::size_t>(enter)] = 1;
  }
  out.w.assign(w.data(), w.data() + n);
  out.value = 0.5 * w.dot(q * w) + c.dot(w);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fine-grid log-gas equilibrium for the golden test file"};
  std::string out_path = "tests/golden/loggas_equilibrium.json";
  double lo = -1.5, hi = 1.5, fine = 0.005, coarse = 0.01;
  app.add_option("--out", out_path, "output JSON path");
  app.add_option("--lo", lo);
  app.add_option("--hi", hi);
  app.add_option("--fine-step", fine);
  app.add_option("--coarse-step", coarse);
  CLI11_PARSE(app, argc, argv);

  const double ratio = coarse / fine;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
    std::cerr << "coarse step must be an integer multiple of the fine step\n";
    return 2;
  }

  PotentialPair pair;
  pair.dim = 1;
  pair.confinement_fn = potentials::power_confinement(2.0);
  pair.interaction_fn = potentials::log_kernel();
  pair.name = "power:2 | log";

  const GridSpec grid = GridSpec::box({lo}, {hi}, fine);
  const std::size_t n = grid.size();
  const DiagonalSurrogate surrogate = diagonal_surrogate(pair, grid.nodes, fine);
  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c(i) = pair.confinement(grid.nodes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      q(i, j) = i == j ? surrogate.diagonal[i] : pair.interaction(grid.nodes[i], grid.nodes[j]);
    }
  }
  const QpResult qp = active_set_qp(q, c);

  const GridSpec coarse_grid = GridSpec::box({lo}, {hi}, coarse);
  std::vector<double> binned(coarse_grid.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (grid.nodes[i][0] - lo) / coarse;
    const double fl = std::floor(t + 1e-9);
    const double frac = t - fl;
    const std::size_t j = static_cast<std::size_t>(fl);
    if (std::abs(frac) < 1e-9 || j + 1 >= binned.size()) {
      binned[std::min(j, binned.size() - 1)] += qp.w[i];
    } else {
      // Fine node strictly between two coarse nodes: split linearly.
      binned[j] += (1.0 - frac) * qp.w[i];
      binned[j + 1] += frac * qp.w[i];
    }
  }

  auto support = [](const GridSpec& g, const std::vector<double>& w) {
    double a = kInf, b = -kInf;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= 1e-7) {
        a = std::min(a, g.nodes[i][0]);
        b = std::max(b, g.nodes[i][0]);
      }
    }
    return std::vector<double>{a, b};
  };

  nlohmann::json j = {
      {"description", "log-gas energy minimizer, V = x^2, W = -log|x-y|, diagonal surrogate at h/2"},
      {"generator", "simplex_refinement"},
      {"fine", {{"lo", lo}, {"hi", hi}, {"step", fine}, {"value", qp.value}, {"iterations", qp.iterations},
                {"kkt_violation", qp.kkt_violation}, {"support", support(grid, qp.w)}}},
      {"grid", {{"lo", lo}, {"hi", hi}, {"step", coarse}}},
      {"weights", binned},
      {"support", support(coarse_grid, binned)},
  };
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "cannot write " << out_path << '\n';
    return 1;
  }
  os << j.dump(2) << '\n';
  std::cout << "value " << qp.value << "  support [" << j["support"][0] << ", " << j["support"][1] << "]  iterations "
            << qp.iterations << '\n';
  return 0;
}
