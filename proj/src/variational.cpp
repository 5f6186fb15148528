#include "gibbslab/variational.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <json.hpp>

#include "gibbslab/detail/parallel.hpp"
#include "gibbslab/functionals.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {
namespace {

constexpr std::size_t kMaxCertifiedNodes = 1500;
constexpr double kArmijo = 1e-4;

// Discretized objective on the feasible nodes:
//   entropic:  sum w (log w - log nu) + (1/2) w'Kw + f(w)
//   energy:    sum w v + (1/2) w'Kw + f(w)
struct Problem {
  bool entropic = false;
  std::size_t dim = 1;
  std::vector<Point> nodes;
  Eigen::VectorXd v;       // V at nodes (energy form)
  Eigen::VectorXd log_nu;  // normalized reference (entropic form)
  Eigen::MatrixXd K;       // symmetrized kernel, diagonal possibly replaced
  DiagonalSurrogate surrogate;
  std::optional<TestFunctional::OnNodes> tilt;
  bool tilt_linear = true;

  std::size_t size() const { return nodes.size(); }

  double tilt_value(const Eigen::VectorXd& w) const {
    return tilt ? tilt->value(std::span<const double>(w.data(), static_cast<std::size_t>(w.size()))) : 0.0;
  }
  void add_tilt_gradient(const Eigen::VectorXd& w, Eigen::VectorXd& g) const {
    if (!tilt) return;
    Eigen::VectorXd t(w.size());
    tilt->gradient(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())),
                   std::span<double>(t.data(), static_cast<std::size_t>(t.size())));
    g += t;
  }

  // Rate part only. lw is log w when available (entropic form).
  double rate(const Eigen::VectorXd& w, const Eigen::VectorXd& kw, const Eigen::VectorXd* lw) const {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      if (entropic) {
        const double l = lw ? (*lw)[i] : std::log(w[i]);
        s.add(w[i] * (l - log_nu[i]));
      } else {
        s.add(w[i] * v[i]);
      }
      s.add(0.5 * w[i] * kw[i]);
    }
    return s.value();
  }
};

void build_kernel(Problem& p, const PotentialPair& pair, double h) {
  const std::size_t n = p.size();
  p.surrogate = diagonal_surrogate(pair, p.nodes, h);
  p.K.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    p.K(i, i) = p.surrogate.diagonal[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = pair.interaction(p.nodes[i], p.nodes[j]);
      const double b = pair.symmetric ? a : pair.interaction(p.nodes[j], p.nodes[i]);
      const double k = 0.5 * (a + b);
      if (k == kInf) {
        throw InvalidArgument("variational: W = +inf between distinct grid nodes " + format_point(p.nodes[i]) +
                              " and " + format_point(p.nodes[j]));
      }
      p.K(i, j) = k;
      p.K(j, i) = k;
    }
  }
}

void attach_tilt(Problem& p, const VariationalOptions& opts) {
  if (!opts.tilt) return;
  if (opts.tilt->kind() == TestFunctional::Kind::kBlBall) {
    throw InvalidArgument("variational: tilt must be linear or tanh_moment");
  }
  p.tilt = opts.tilt->on_nodes(p.dim, p.nodes);
  p.tilt_linear = opts.tilt->kind() == TestFunctional::Kind::kLinear;
}

struct RunOutcome {
  Eigen::VectorXd w;
  double value = kInf;
  std::size_t iterations = 0;
  double gap = kInf;
  bool converged = false;
  std::vector<double> trace;
};

Eigen::VectorXd dirichlet_start(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) w[i] = -std::log(1.0 - uniform01(rng));
  return w / w.sum();
}

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

// Entropic mirror descent in log-weights with Armijo backtracking.
RunOutcome mirror_descent(const Problem& p, const Eigen::VectorXd& start, const VariationalOptions& opts) {
  RunOutcome out;
  Eigen::VectorXd lw = start.array().max(1e-300).log().matrix();
  lw.array() -= log_sum_exp(lw);
  Eigen::VectorXd w = lw.array().exp().matrix();
  Eigen::VectorXd kw = p.K * w;
  double f = p.rate(w, kw, &lw) + p.tilt_value(w);
  out.trace.push_back(f);
  double eta = 1.0;
  Eigen::VectorXd g(w.size());
  for (out.iterations = 0; out.iterations < opts.max_iter; ++out.iterations) {
    g = lw - p.log_nu + kw;
    g.array() += 1.0;
    p.add_tilt_gradient(w, g);
    const double mean = g.dot(w);
    out.gap = (g.array() - mean).abs().maxCoeff();
    if (out.gap < opts.tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXd lw_new = lw - eta * g;
      lw_new.array() -= log_sum_exp(lw_new);
      Eigen::VectorXd w_new = lw_new.array().exp().matrix();
      Eigen::VectorXd kw_new = p.K * w_new;
      const double f_new = p.rate(w_new, kw_new, &lw_new) + p.tilt_value(w_new);
      if (f_new <= f + kArmijo * g.dot(w_new - w)) {
        lw.swap(lw_new);
        w.swap(w_new);
        kw.swap(kw_new);
        f = f_new;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    out.trace.push_back(f);
    eta = std::min(1.0, 2.0 * eta);
  }
  out.w = w;
  out.value = f;
  return out;
}

std::size_t first_argmin(const Eigen::VectorXd& x) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (x[i] < x[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
  }
  return best;
}

// Away-step Frank-Wolfe with exact line search for linear tilts and
// golden-section search otherwise. Kw is updated incrementally.
RunOutcome frank_wolfe(const Problem& p, const Eigen::VectorXd& start, const VariationalOptions& opts) {
  RunOutcome out;
  const Eigen::Index n = start.size();
  Eigen::VectorXd w = start;
  Eigen::VectorXd kw = p.K * w;
  Eigen::VectorXd g(n), d(n), kd(n);
  auto objective = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& kx) {
    return p.rate(x, kx, nullptr) + p.tilt_value(x);
  };
  double f = objective(w, kw);
  out.trace.push_back(f);
  for (out.iterations = 0; out.iterations < opts.max_iter; ++out.iterations) {
    if (out.iterations > 0 && out.iterations % 1000 == 0) kw = p.K * w;
    g = p.v + kw;
    p.add_tilt_gradient(w, g);
    const double gw = g.dot(w);
    const std::size_t s = first_argmin(g);
    out.gap = gw - g[static_cast<Eigen::Index>(s)];
    if (out.gap <= opts.tol) {
      out.converged = true;
      break;
    }
    std::size_t a = 0;
    double ga = -kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w[i] > 0.0 && g[i] > ga) {
        ga = g[i];
        a = static_cast<std::size_t>(i);
      }
    }
    const bool away = ga - gw > out.gap && w[static_cast<Eigen::Index>(a)] < 1.0;
    double gamma_max = 1.0;
    if (away) {
      const double wa = w[static_cast<Eigen::Index>(a)];
      gamma_max = wa / (1.0 - wa);
      d = w;
      d[static_cast<Eigen::Index>(a)] -= 1.0;
      kd = kw - p.K.col(static_cast<Eigen::Index>(a));
    } else {
      d = -w;
      d[static_cast<Eigen::Index>(s)] += 1.0;
      kd = p.K.col(static_cast<Eigen::Index>(s)) - kw;
    }
    const double slope = g.dot(d);
    const double curv = d.dot(kd);
    double gamma;
    if (!p.tilt || p.tilt_linear) {
      gamma = curv > 0.0 ? std::min(gamma_max, -slope / curv) : gamma_max;
    } else {
      // phi(t) = a0 + a1 t + a2 t^2 + f(w + t d)
      const double a1 = (p.v + kw).dot(d);
      const double a2 = 0.5 * curv;
      auto phi = [&](double t) { return a1 * t + a2 * t * t + p.tilt_value(w + t * d); };
      const double r = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = 0.0, hi = gamma_max;
      double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
      double f1 = phi(x1), f2 = phi(x2);
      for (int it = 0; it < 100 && hi - lo > 1e-14 * (1.0 + gamma_max); ++it) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - r * (hi - lo);
          f1 = phi(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + r * (hi - lo);
          f2 = phi(x2);
        }
      }
      gamma = 0.5 * (lo + hi);
      const double phi0 = phi(0.0);
      if (phi(gamma_max) < phi(gamma)) gamma = gamma_max;
      if (phi(gamma) > phi0) gamma = 0.0;
    }
    if (!(gamma > 0.0)) break;
    w += gamma * d;
    kw += gamma * kd;
    if (away && gamma == gamma_max) w[static_cast<Eigen::Index>(a)] = 0.0;
    w = w.cwiseMax(0.0);
    const double f_new = objective(w, kw);
    out.trace.push_back(f_new);
    f = f_new;
  }
  w /= w.sum();
  kw = p.K * w;
  out.w = w;
  out.value = objective(w, kw);
  return out;
}

MinimizationResult assemble(const Problem& p, std::vector<RunOutcome> runs, std::vector<std::uint64_t> seeds,
                            std::string method, bool certified) {
  MinimizationResult r;
  r.method = std::move(method);
  r.seeds = std::move(seeds);
  std::size_t best = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    r.start_values.push_back(runs[k].value);
    if (runs[k].value < runs[best].value) best = k;
  }
  const RunOutcome& b = runs[best];
  r.best_start = best;
  r.nodes = p.nodes;
  r.weights.assign(b.w.data(), b.w.data() + b.w.size());
  std::vector<Point> atoms;
  std::vector<double> ws;
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    if (r.weights[i] > 0.0) {
      atoms.push_back(p.nodes[i]);
      ws.push_back(r.weights[i]);
    }
  }
  r.minimizer = DiscreteMeasure(p.dim, std::move(atoms), std::move(ws));
  r.value = b.value;
  r.tilt_value = p.tilt_value(b.w);
  r.rate_value = r.value - r.tilt_value;
  r.iterations = b.iterations;
  r.convergence_gap = b.gap;
  r.converged = b.converged;
  r.surrogate = p.surrogate;
  r.objective_trace = b.trace;
  r.local = !(certified && (!p.tilt || p.tilt_linear));
  if (!std::isfinite(r.value)) throw NumericalError("variational: every start ended at +inf");
  return r;
}

// Smallest eigenvalue of K on the zero-sum subspace, through a Householder
// basis of the orthogonal complement of the constant vector.
double cpd_min_eigenvalue(const Eigen::MatrixXd& k) {
  const Eigen::Index n = k.rows();
  if (n < 2) return kInf;
  Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  z[0] -= 1.0;
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * z * z.transpose() / z.squaredNorm();
  const Eigen::MatrixXd q = h.rightCols(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.transpose() * k * q, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool certify(const Problem& p) {
  if (p.size() > kMaxCertifiedNodes) return false;
  const double scale = std::max(1.0, p.K.cwiseAbs().maxCoeff());
  return cpd_min_eigenvalue(p.K) >= -1e-10 * scale;
}

std::vector<std::uint64_t> start_seeds(const VariationalOptions& opts) {
  if (opts.starts == 0) throw InvalidArgument("variational: starts must be >= 1");
  std::vector<std::uint64_t> s(opts.starts);
  for (std::size_t k = 0; k < opts.starts; ++k) s[k] = derive_seed(opts.seed, k);
  return s;
}

}  // namespace

GridSpec GridSpec::box(Point lo, Point hi, double h, std::size_t cap) {
  if (lo.size() != hi.size() || lo.empty()) throw InvalidArgument("GridSpec::box: bounds of mismatched dimension");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("GridSpec::box: step must be positive");
  const std::size_t d = lo.size();
  std::vector<std::size_t> per(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (!(hi[k] >= lo[k])) throw InvalidArgument("GridSpec::box: hi < lo");
    per[k] = static_cast<std::size_t>(std::floor((hi[k] - lo[k]) / h + 1e-3)) + 1;
    if (total > cap / per[k]) throw BudgetExceeded("GridSpec::box: more than " + std::to_string(cap) + " nodes");
    total *= per[k];
  }
  GridSpec g;
  g.dim = d;
  g.step = h;
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Point x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = lo[k] + static_cast<double>(idx[k]) * h;
    g.nodes.push_back(std::move(x));
    for (std::size_t k = d; k > 0; --k) {
      if (++idx[k - 1] < per[k - 1]) break;
      idx[k - 1] = 0;
    }
  }
  if (g.nodes.size() < 2) throw InvalidArgument("GridSpec::box: need at least 2 nodes");
  return g;
}

GridSpec GridSpec::explicit_nodes(std::size_t dim, std::vector<Point> nodes) {
  if (nodes.size() < 2) throw InvalidArgument("GridSpec: need at least 2 nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].size() != dim) throw InvalidArgument("GridSpec: node of wrong dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i] == nodes[j]) throw InvalidArgument("GridSpec: duplicate node " + format_point(nodes[i]));
    }
  }
  GridSpec g;
  g.dim = dim;
  g.nodes = std::move(nodes);
  return g;
}

GridSpec GridSpec::from_reference(const ReferenceMeasure& ell) {
  if (!ell.is_finite()) throw InvalidArgument("GridSpec::from_reference: reference must be finite");
  return explicit_nodes(ell.dim(), ell.atoms());
}

double GridSpec::spacing() const {
  if (step > 0.0) return step;
  double best = kInf;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) best = std::min(best, distance(nodes[i], nodes[j]));
  }
  return best;
}

nlohmann::json to_json(const GridSpec& grid) {
  return {{"dim", grid.dim}, {"node_count", grid.size()}, {"step", grid.step}, {"spacing", grid.spacing()}};
}

DiagonalSurrogate diagonal_surrogate(const PotentialPair& pair, const std::vector<Point>& nodes, double h) {
  DiagonalSurrogate s;
  s.h = h;
  s.diagonal.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double k = pair.interaction(nodes[i], nodes[i]);
    if (k < kInf) {
      s.diagonal[i] = k;
      continue;
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("diagonal surrogate: need a positive spacing");
    Point y = nodes[i];
    y[0] += 0.5 * h;
    const double a = pair.interaction(nodes[i], y);
    const double b = pair.symmetric ? a : pair.interaction(y, nodes[i]);
    s.diagonal[i] = 0.5 * (a + b);
    if (!std::isfinite(s.diagonal[i])) throw NumericalError("diagonal surrogate: kernel at distance h/2 is +inf");
    s.applied = true;
  }
  return s;
}

double conditional_min_eigenvalue(const PotentialPair& pair, const std::vector<Point>& nodes,
                                  const DiagonalSurrogate& surrogate) {
  Problem p;
  p.dim = pair.dim;
  p.nodes = nodes;
  build_kernel(p, pair, surrogate.h);
  return cpd_min_eigenvalue(p.K);
}

MinimizationResult minimize_I(const PotentialPair& pair, const ReferenceMeasure& ell, const GridSpec& grid,
                              const VariationalOptions& opts) {
  if (grid.dim != pair.dim || ell.dim() != pair.dim) throw InvalidArgument("minimize_I: dimension mismatch");
  Problem p;
  p.entropic = true;
  p.dim = grid.dim;
  std::vector<double> log_w;
  for (const auto& x : grid.nodes) {
    double log_l;
    if (ell.is_finite()) {
      const double l = ell.weight_at(x);
      log_l = l > 0.0 ? std::log(l) : -kInf;
    } else {
      log_l = ell.log_density(x);
    }
    const double v = pair.confinement(x);
    if (log_l == -kInf || v == kInf) continue;
    p.nodes.push_back(x);
    log_w.push_back(log_l - v);
  }
  if (p.nodes.empty()) throw InvalidArgument("minimize_I: no grid node carries reference mass");
  p.log_nu = Eigen::Map<Eigen::VectorXd>(log_w.data(), static_cast<Eigen::Index>(log_w.size()));
  p.log_nu.array() -= log_sum_exp(p.log_nu);
  build_kernel(p, pair, grid.spacing());
  attach_tilt(p, opts);
  const bool certified = certify(p);

  const auto seeds = start_seeds(opts);
  std::vector<RunOutcome> runs(seeds.size());
  detail::parallel_for(seeds.size(), opts.threads, [&](std::size_t k) {
    const Eigen::VectorXd start =
        k == 0 ? Eigen::VectorXd(p.log_nu.array().exp()) : dirichlet_start(p.size(), seeds[k]);
    runs[k] = mirror_descent(p, start, opts);
  });
  for (const auto& r : runs) {
    for (std::size_t t = 1; t < r.trace.size(); ++t) {
      if (r.trace[t] > r.trace[t - 1]) throw NumericalError("minimize_I: objective increased during descent");
    }
  }
  return assemble(p, std::move(runs), seeds, "entropic_mirror_descent", certified);
}

MinimizationResult minimize_J(const PotentialPair& pair, const GridSpec& grid, const VariationalOptions& opts) {
  if (grid.dim != pair.dim) throw InvalidArgument("minimize_J: dimension mismatch");
  Problem p;
  p.dim = grid.dim;
  std::vector<double> vs;
  for (const auto& x : grid.nodes) {
    const double v = pair.confinement(x);
    if (v == kInf) continue;
    p.nodes.push_back(x);
    vs.push_back(v);
  }
  if (p.nodes.empty()) throw InvalidArgument("minimize_J: V = +inf on every grid node");
  p.v = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  build_kernel(p, pair, grid.spacing());
  attach_tilt(p, opts);
  const bool certified = certify(p);

  const auto seeds = start_seeds(opts);
  std::vector<RunOutcome> runs(seeds.size());
  detail::parallel_for(seeds.size(), opts.threads, [&](std::size_t k) {
    const Eigen::VectorXd start = k == 0 ? Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.size()),
                                                                      1.0 / static_cast<double>(p.size()))
                                         : dirichlet_start(p.size(), seeds[k]);
    runs[k] = frank_wolfe(p, start, opts);
  });
  return assemble(p, std::move(runs), seeds, "away_step_frank_wolfe", certified);
}

MinimizationResult simplex_scan_oracle(std::size_t dim, const std::vector<Point>& nodes,
                                       const WeightObjective& objective, double step, std::uint64_t budget) {
  const std::size_t m = nodes.size();
  if (m < 1 || m > 4) throw InvalidArgument("simplex_scan_oracle: need 1 to 4 nodes");
  if (!(step >= 1e-3) || step > 1.0) throw InvalidArgument("simplex_scan_oracle: step must lie in [1e-3, 1]");
  const long K = std::lround(1.0 / step);
  if (std::abs(static_cast<double>(K) * step - 1.0) > 1e-9) {
    throw InvalidArgument("simplex_scan_oracle: 1/step must be an integer");
  }
  // C(K + m - 1, m - 1) lattice points.
  double count = 1.0;
  for (std::size_t j = 1; j < m; ++j) count = count * static_cast<double>(K + static_cast<long>(j)) / static_cast<double>(j);
  if (count > static_cast<double>(budget)) throw BudgetExceeded("simplex_scan_oracle: lattice exceeds the budget");

  std::vector<long> k(m, 0), best_k;
  std::vector<double> w(m);
  double best = kInf;
  std::size_t evaluated = 0;
  auto rec = [&](auto&& self, std::size_t i, long remaining) -> void {
    if (i + 1 == m) {
      k[i] = remaining;
      for (std::size_t j = 0; j < m; ++j) w[j] = static_cast<double>(k[j]) / static_cast<double>(K);
      const double v = objective(w);
      ++evaluated;
      if (v < best) {
        best = v;
        best_k = k;
      }
      return;
    }
    for (long c = 0; c <= remaining; ++c) {
      k[i] = c;
      self(self, i + 1, remaining - c);
    }
  };
  rec(rec, 0, K);
  if (best_k.empty()) throw NumericalError("simplex_scan_oracle: objective is +inf on the whole lattice");

  MinimizationResult r;
  r.method = "simplex_scan";
  r.nodes = nodes;
  r.weights.resize(m);
  std::vector<Point> atoms;
  std::vector<double> ws;
  for (std::size_t j = 0; j < m; ++j) {
    r.weights[j] = static_cast<double>(best_k[j]) / static_cast<double>(K);
    if (best_k[j] > 0) {
      atoms.push_back(nodes[j]);
      ws.push_back(r.weights[j]);
    }
  }
  r.minimizer = DiscreteMeasure(dim, std::move(atoms), std::move(ws));
  r.value = best;
  r.rate_value = best;
  r.iterations = evaluated;
  r.convergence_gap = step;
  r.converged = true;
  r.local = false;
  return r;
}

namespace {

DiscreteMeasure measure_on(std::size_t dim, const std::vector<Point>& nodes, std::span<const double> w) {
  std::vector<Point> atoms;
  std::vector<double> ws;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      atoms.push_back(nodes[i]);
      ws.push_back(w[i]);
    }
  }
  return DiscreteMeasure(dim, std::move(atoms), std::move(ws));
}

}  // namespace

WeightObjective rate_I_objective(const PotentialPair& pair, const ReferenceMeasure& ell,
                                 const std::vector<Point>& nodes, std::optional<TestFunctional> tilt) {
  std::vector<Point> atoms;
  std::vector<double> weights;
  for (const auto& x : nodes) {
    const double l = ell.is_finite() ? ell.weight_at(x) : std::exp(ell.log_density(x));
    if (l > 0.0) {
      atoms.push_back(x);
      weights.push_back(l);
    }
  }
  if (atoms.empty()) throw InvalidArgument("rate_I_objective: no node carries reference mass");
  const ReferenceMeasure restricted = ReferenceMeasure::finite(pair.dim, std::move(atoms), std::move(weights));
  return [=](std::span<const double> w) {
    const DiscreteMeasure mu = measure_on(pair.dim, nodes, w);
    const double rate = functionals::rate_I(mu, pair, restricted).value;
    return tilt ? rate + (*tilt)(mu) : rate;
  };
}

WeightObjective rate_J_objective(const PotentialPair& pair, const std::vector<Point>& nodes,
                                 std::optional<TestFunctional> tilt) {
  return [=](std::span<const double> w) {
    const DiscreteMeasure mu = measure_on(pair.dim, nodes, w);
    const double rate = functionals::rate_J(mu, pair).value;
    return tilt ? rate + (*tilt)(mu) : rate;
  };
}

WeightObjective surrogate_J_objective(const PotentialPair& pair, const std::vector<Point>& nodes,
                                      const DiagonalSurrogate& surrogate, std::optional<TestFunctional> tilt) {
  if (surrogate.diagonal.size() != nodes.size()) throw InvalidArgument("surrogate_J_objective: size mismatch");
  return [=](std::span<const double> w) {
    const DiscreteMeasure mu = measure_on(pair.dim, nodes, w);
    CompensatedSum s;
    s.add(functionals::confinement_energy(mu, pair));
    s.add(functionals::interaction_energy_offdiag(mu, pair.interaction_fn));
    for (std::size_t i = 0; i < w.size(); ++i) s.add(0.5 * w[i] * w[i] * surrogate.diagonal[i]);
    return tilt ? s.value() + (*tilt)(mu) : s.value();
  };
}

nlohmann::json to_json(const MinimizationResult& r) {
  nlohmann::json s{{"applied", r.surrogate.applied}};
  if (r.surrogate.applied) {
    s["rule"] = "diagonal kernel entry replaced by the kernel at distance h/2";
    s["h"] = r.surrogate.h;
  }
  return {{"format_version", 1},
          {"method", r.method},
          {"value", r.value},
          {"rate_value", r.rate_value},
          {"tilt_value", r.tilt_value},
          {"iterations", r.iterations},
          {"convergence_gap", r.convergence_gap},
          {"converged", r.converged},
          {"local", r.local},
          {"seeds", r.seeds},
          {"start_values", r.start_values},
          {"best_start", r.best_start},
          {"surrogate", s},
          {"minimizer", to_json(r.minimizer)}};
}

}  // namespace gibbslab
