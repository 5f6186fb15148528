#include "gibbslab/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "gibbslab/detail/parallel.hpp"

namespace gibbslab::enumeration {
namespace {

// Per-atom and per-pair energy contributions of H_n on a finite reference.
struct Tables {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> v;      // V(a) / n
  std::vector<double> w;      // (W(a, b) + W(b, a)) / (2 n^2), row-major
  std::vector<double> log_l;  // log l(a)
};

Tables build_tables(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n) {
  if (!ell.is_finite()) throw InvalidArgument("enumeration: reference measure must be finite");
  if (ell.dim() != pair.dim) throw InvalidArgument("enumeration: dimension mismatch");
  if (n == 0) throw InvalidArgument("enumeration: n must be >= 1");
  Tables t;
  t.m = ell.size();
  t.n = n;
  const double nd = static_cast<double>(n);
  t.v.resize(t.m);
  t.log_l.resize(t.m);
  t.w.assign(t.m * t.m, 0.0);
  for (std::size_t a = 0; a < t.m; ++a) {
    t.v[a] = pair.confinement(ell.atoms()[a]) / nd;
    t.log_l[a] = std::log(ell.weights()[a]);
  }
  // Only needed when n >= 2, where coincident particles do interact.
  if (n >= 2) {
    const double c = 1.0 / (2.0 * nd * nd);
    for (std::size_t a = 0; a < t.m; ++a) {
      for (std::size_t b = 0; b < t.m; ++b) {
        const double wab = pair.interaction(ell.atoms()[a], ell.atoms()[b]);
        const double wba = pair.symmetric ? wab : pair.interaction(ell.atoms()[b], ell.atoms()[a]);
        t.w[a * t.m + b] = c * (wab + wba);
      }
    }
  }
  return t;
}

// f(L_n) cached by occupation counts.
class TypeCache {
 public:
  TypeCache(std::size_t m, std::size_t n) : m_(m) {
    radix_.resize(m);
    std::uint64_t p = 1;
    for (std::size_t a = 0; a < m; ++a) {
      radix_[a] = p;
      if (a + 1 < m && p > (~std::uint64_t{0}) / (n + 1)) overflow_ = true;
      p *= (n + 1);
    }
  }

  template <class F>
  double get(const std::vector<std::uint32_t>& counts, F&& compute) {
    if (!overflow_) {
      std::uint64_t key = 0;
      for (std::size_t a = 0; a < m_; ++a) key += radix_[a] * counts[a];
      auto it = fast_.find(key);
      if (it != fast_.end()) return it->second;
      const double v = compute();
      fast_.emplace(key, v);
      return v;
    }
    auto it = slow_.find(counts);
    if (it != slow_.end()) return it->second;
    const double v = compute();
    slow_.emplace(counts, v);
    return v;
  }

 private:
  std::size_t m_;
  std::vector<std::uint64_t> radix_;
  bool overflow_ = false;
  std::unordered_map<std::uint64_t, double> fast_;
  std::map<std::vector<std::uint32_t>, double> slow_;
};

struct LeafState {
  double energy = 0.0;  // H_n of the configuration
  double log_l = 0.0;   // sum log l(x_i)
  const std::vector<std::uint32_t>* counts = nullptr;
  std::uint64_t index = 0;
};

// Depth-first walk over configurations with first digit `first`, pruning
// branches whose partial energy is already +inf.
template <class Visit>
void walk_block(const Tables& t, std::size_t first, Visit&& visit) {
  std::vector<std::size_t> path(t.n);
  std::vector<std::uint32_t> counts(t.m, 0);
  auto rec = [&](auto&& self, std::size_t k, double energy, double log_l, std::uint64_t index) -> void {
    if (k == t.n) {
      visit(LeafState{energy, log_l, &counts, index});
      return;
    }
    const std::size_t lo = k == 0 ? first : 0;
    const std::size_t hi = k == 0 ? first + 1 : t.m;
    for (std::size_t a = lo; a < hi; ++a) {
      double e = energy + t.v[a];
      for (std::size_t j = 0; j < k && e < kInf; ++j) e += t.w[a * t.m + path[j]];
      if (e == kInf) continue;
      path[k] = a;
      ++counts[a];
      self(self, k + 1, e, log_l + t.log_l[a], index * t.m + a);
      --counts[a];
    }
  };
  rec(rec, 0, 0.0, 0.0, 0);
}

}  // namespace

std::uint64_t config_count(std::size_t m, std::size_t n, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (total > budget / std::max<std::size_t>(m, 1)) {
      throw BudgetExceeded("enumeration: " + std::to_string(m) + "^" + std::to_string(n) +
                           " configurations exceed the budget of " + std::to_string(budget));
    }
    total *= m;
  }
  if (total > budget) throw BudgetExceeded("enumeration: configuration count exceeds the budget");
  return total;
}

namespace {

// Both sums; log_z is -inf when every configuration is forbidden.
LaplaceTerms sum_terms(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                       std::size_t n, double beta, const Options& opts) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("enumeration: beta must be positive");
  const Tables t = build_tables(pair, ell, n);
  config_count(t.m, n, opts.budget);
  const bool with_f = !f.is_zero() || f.offset() != 0.0;

  std::vector<LogSumExp> z(t.m), zf(t.m);
  detail::parallel_for(t.m, opts.threads, [&](std::size_t first) {
    const auto f_nodes = f.on_nodes(ell.dim(), ell.atoms());
    TypeCache cache(t.m, n);
    std::vector<double> w(t.m);
    LogSumExp& acc = z[first];
    LogSumExp& acc_f = zf[first];
    walk_block(t, first, [&](const LeafState& s) {
      const double base = -beta * s.energy + s.log_l;
      acc.add(base);
      if (!with_f) return;
      const double fv = cache.get(*s.counts, [&] {
        for (std::size_t a = 0; a < t.m; ++a) w[a] = static_cast<double>((*s.counts)[a]) / static_cast<double>(n);
        return f_nodes.value(w);
      });
      acc_f.add(base - beta * fv);
    });
  });
  LogSumExp total, total_f;
  for (std::size_t a = 0; a < t.m; ++a) {
    total.add(z[a].value());
    total_f.add(zf[a].value());
  }
  LaplaceTerms out;
  out.beta = beta;
  out.log_z = total.value();
  out.log_z_f = with_f ? total_f.value() : out.log_z;
  return out;
}

}  // namespace

double log_partition(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                     const Options& opts) {
  return sum_terms(pair, ell, TestFunctional::zero(), n, beta, opts).log_z;
}

LaplaceTerms laplace_terms(const PotentialPair& pair, const ReferenceMeasure& ell, const TestFunctional& f,
                           std::size_t n, double beta, const Options& opts) {
  LaplaceTerms out = sum_terms(pair, ell, f, n, beta, opts);
  if (!std::isfinite(out.log_z)) throw NumericalError("enumeration: Z_n = 0 (every configuration has H_n = +inf)");
  return out;
}

std::vector<std::size_t> ConfigLaw::digits(std::uint64_t index) const {
  std::vector<std::size_t> d(n);
  for (std::size_t k = n; k > 0; --k) {
    d[k - 1] = static_cast<std::size_t>(index % m);
    index /= m;
  }
  return d;
}

ParticleConfig ConfigLaw::config(std::uint64_t index) const {
  std::vector<Point> pts;
  for (std::size_t a : digits(index)) pts.push_back(atoms[a]);
  return ParticleConfig(dim, std::move(pts));
}

std::uint64_t ConfigLaw::index_of(const ParticleConfig& config) const {
  if (config.size() != n) throw InvalidArgument("ConfigLaw::index_of: wrong particle count");
  std::uint64_t idx = 0;
  for (const auto& p : config.points) {
    const auto it = std::find(atoms.begin(), atoms.end(), p);
    if (it == atoms.end()) throw InvalidArgument("ConfigLaw::index_of: point " + format_point(p) + " is not an atom");
    idx = idx * m + static_cast<std::uint64_t>(it - atoms.begin());
  }
  return idx;
}

ConfigLaw gibbs_law(const PotentialPair& pair, const ReferenceMeasure& ell, std::size_t n, double beta,
                    const Options& opts) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("enumeration: beta must be positive");
  const Tables t = build_tables(pair, ell, n);
  const std::uint64_t total = config_count(t.m, n, opts.budget);
  ConfigLaw law;
  law.n = n;
  law.m = t.m;
  law.dim = ell.dim();
  law.atoms = ell.atoms();
  std::vector<double> logp(total, -kInf);
  detail::parallel_for(t.m, opts.threads, [&](std::size_t first) {
    walk_block(t, first, [&](const LeafState& s) { logp[s.index] = -beta * s.energy + s.log_l; });
  });
  LogSumExp lse;
  for (double x : logp) lse.add(x);
  const double log_z = lse.value();
  if (!std::isfinite(log_z)) throw NumericalError("enumeration: Z_n = 0 (every configuration has H_n = +inf)");
  law.prob.resize(total);
  for (std::uint64_t k = 0; k < total; ++k) law.prob[k] = std::exp(logp[k] - log_z);
  return law;
}

}  // namespace gibbslab::enumeration
