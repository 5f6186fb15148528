#include "gibbslab/reference.hpp"

#include <algorithm>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

namespace gibbslab {

bool Box::contains(std::span<const double> x) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (x[k] < lo[k] || x[k] > hi[k]) return false;
  }
  return true;
}

ReferenceMeasure ReferenceMeasure::finite(std::size_t dim, std::vector<Point> atoms,
                                          std::vector<double> weights) {
  if (dim == 0) throw InvalidArgument("ReferenceMeasure: dimension must be >= 1");
  if (atoms.empty()) throw InvalidArgument("ReferenceMeasure: no atoms");
  if (atoms.size() != weights.size()) {
    throw InvalidArgument("ReferenceMeasure: atoms and weights differ in length");
  }
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  ReferenceMeasure r;
  r.finite_ = true;
  r.dim_ = dim;
  for (std::size_t i : order) {
    if (atoms[i].size() != dim) throw InvalidArgument("ReferenceMeasure: atom of wrong dimension");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("ReferenceMeasure: weights must be positive and finite");
    }
    if (!r.atoms_.empty() && r.atoms_.back() == atoms[i]) {
      r.weights_.back() += weights[i];
    } else {
      r.atoms_.push_back(std::move(atoms[i]));
      r.weights_.push_back(weights[i]);
    }
  }
  return r;
}

ReferenceMeasure ReferenceMeasure::lebesgue(std::size_t dim) {
  return density(dim, [](std::span<const double>) { return 0.0; });
}

ReferenceMeasure ReferenceMeasure::lebesgue_box(Box box) {
  const std::size_t d = box.dim();
  return density(d, [](std::span<const double>) { return 0.0; }, std::move(box));
}

ReferenceMeasure ReferenceMeasure::density(std::size_t dim, LogDensity log_density,
                                           std::optional<Box> box) {
  if (dim == 0) throw InvalidArgument("ReferenceMeasure: dimension must be >= 1");
  if (box) {
    if (box->lo.size() != dim || box->hi.size() != dim) {
      throw InvalidArgument("ReferenceMeasure: box of wrong dimension");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(box->lo[k] < box->hi[k])) throw InvalidArgument("ReferenceMeasure: empty box");
    }
  }
  ReferenceMeasure r;
  r.finite_ = false;
  r.dim_ = dim;
  r.box_ = std::move(box);
  r.log_density_ = std::move(log_density);
  return r;
}

double ReferenceMeasure::weight_at(std::span<const double> x) const {
  const Point key(x.begin(), x.end());
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), key);
  if (it != atoms_.end() && *it == key) return weights_[static_cast<std::size_t>(it - atoms_.begin())];
  return 0.0;
}

double ReferenceMeasure::log_density(std::span<const double> x) const {
  if (finite_) throw InvalidArgument("ReferenceMeasure: log_density on a finite reference");
  if (box_ && !box_->contains(x)) return -kInf;
  return log_density_(x);
}

double ReferenceMeasure::log_integral_exp_neg(const Potential& u) const {
  LogSumExp lse;
  if (finite_) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const double v = checked_value(u(atoms_[i]), "potential", atoms_[i]);
      lse.add(std::log(weights_[i]) - v);
    }
    return lse.value();
  }
  if (!box_) {
    throw InvalidArgument("ReferenceMeasure: quadrature needs a bounded box domain");
  }
  using Rule = boost::math::quadrature::gauss<double, 20>;
  // Full symmetric node set of the 20-point rule on [-1, 1].
  std::vector<double> nodes, wts;
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    const double a = Rule::abscissa()[i];
    const double w = Rule::weights()[i];
    nodes.push_back(a);
    wts.push_back(w);
    if (a != 0.0) {
      nodes.push_back(-a);
      wts.push_back(w);
    }
  }
  const std::size_t per_cell = nodes.size();
  const std::size_t cells = dim_ == 1 ? 256 : dim_ == 2 ? 24 : dim_ == 3 ? 5 : 2;
  const std::size_t per_axis = cells * per_cell;
  std::vector<std::vector<double>> ax(dim_), aw(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    const double h = (box_->hi[k] - box_->lo[k]) / static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const double mid = box_->lo[k] + (static_cast<double>(c) + 0.5) * h;
      for (std::size_t q = 0; q < per_cell; ++q) {
        ax[k].push_back(mid + 0.5 * h * nodes[q]);
        aw[k].push_back(std::log(0.5 * h * wts[q]));
      }
    }
  }
  std::vector<std::size_t> idx(dim_, 0);
  Point x(dim_);
  while (true) {
    double logw = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      x[k] = ax[k][idx[k]];
      logw += aw[k][idx[k]];
    }
    const double v = checked_value(u(x), "potential", x);
    if (v < kInf) {
      const double ld = log_density_(x);
      if (ld > -kInf) lse.add(logw + ld - v);
    }
    std::size_t k = 0;
    while (k < dim_ && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == dim_) break;
  }
  return lse.value();
}

}  // namespace gibbslab
