#include "gibbslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "gibbslab/grid_potential.hpp"

namespace gibbslab::config {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path, "expected a positive finite number");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Point as_point(const json& j, std::size_t dim, const std::string& path) {
  Point p;
  if (j.is_number() && dim == 1) {
    p.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) p.push_back(as_number(j[k], index_path(path, k)));
  } else {
    throw ConfigError(path, "expected a point");
  }
  if (p.size() != dim) {
    throw ConfigError(path, "expected a point of dimension " + std::to_string(dim));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw ConfigError(path, "coordinates must be finite");
  }
  return p;
}

/// Splits "name:param" into name and optional numeric parameter.
struct NameParam {
  std::string name;
  std::optional<std::string> param;
};

NameParam split_name(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, std::nullopt};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

double param_number(const NameParam& np, const std::string& path) {
  if (!np.param) throw ConfigError(path, "'" + np.name + "' needs a parameter, as in '" + np.name + ":2'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(*np.param, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != np.param->size() || !std::isfinite(v)) {
    throw ConfigError(path, "bad numeric parameter '" + *np.param + "'");
  }
  return v;
}

void no_param(const NameParam& np, const std::string& path) {
  if (np.param) throw ConfigError(path, "'" + np.name + "' takes no parameter");
}

TabulatedGrid load_table(const NameParam& np, const std::string& path) {
  if (!np.param || np.param->empty()) throw ConfigError(path, "'" + np.name + "' needs a file path");
  try {
    return TabulatedGrid::load(*np.param);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

Box parse_box(const json& j, std::size_t dim, const std::string& path) {
  Box b{as_point(require(j, "lo", path), dim, join(path, "lo")), as_point(require(j, "hi", path), dim, join(path, "hi"))};
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(b.hi[k] > b.lo[k])) throw ConfigError(path, "hi must exceed lo on every axis");
  }
  return b;
}

potentials::Region parse_region(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected {\"box\": ...} or {\"ball\": ...}");
  if (j.contains("box")) {
    const Box b = parse_box(j["box"], dim, join(path, "box"));
    return potentials::Region::box(b.lo, b.hi);
  }
  if (j.contains("ball")) {
    const std::string p = join(path, "ball");
    const json& b = j["ball"];
    return potentials::Region::ball(as_point(require(b, "center", p), dim, join(p, "center")),
                                    positive(require(b, "radius", p), join(p, "radius")));
  }
  throw ConfigError(path, "expected {\"box\": ...} or {\"ball\": ...}");
}

/// Spec of either form: a string, or an object with "name" or "sum".
template <class Fn, class Leaf>
Fn parse_spec(json& j, const std::string& path, Leaf leaf) {
  if (j.is_string()) {
    json none = json::object();
    return leaf(split_name(j.get<std::string>()), none, path);
  }
  if (!j.is_object()) throw ConfigError(path, "expected a catalog name or an object");
  double scale = 1.0;
  if (j.contains("scale")) {
    scale = as_number(j["scale"], join(path, "scale"));
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError(join(path, "scale"), "must be finite and >= 0");
  }
  Fn base;
  if (j.contains("sum")) {
    json& terms = j["sum"];
    if (!terms.is_array() || terms.empty()) throw ConfigError(join(path, "sum"), "expected a non-empty array");
    std::vector<Fn> parts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      parts.push_back(parse_spec<Fn>(terms[i], index_path(join(path, "sum"), i), leaf));
    }
    base = [parts](auto... args) {
      CompensatedSum s;
      for (const auto& f : parts) s.add(f(args...));
      return s.value();
    };
  } else {
    base = leaf(split_name(as_string(require(j, "name", path), join(path, "name"))), j, path);
  }
  if (scale == 1.0) return base;
  return [base, scale](auto... args) { return scaled(scale, base(args...), "scaled potential"); };
}

std::string spec_name(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("sum")) {
    std::string s;
    for (const auto& t : j["sum"]) s += (s.empty() ? "" : " + ") + spec_name(t);
    return "(" + s + ")";
  }
  std::string base = j.is_object() && j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "?";
  if (j.is_object() && j.contains("scale") && j["scale"].is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j["scale"].get<double>() << "*" << base;
    return os.str();
  }
  return base;
}

}  // namespace

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

double number_or(json& j, const std::string& key, double def, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains(key)) {
    j[key] = def;
    return def;
  }
  return as_number(j[key], join(path, key));
}

std::uint64_t unsigned_or(json& j, const std::string& key, std::uint64_t def, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains(key)) {
    j[key] = def;
    return def;
  }
  const json& v = j[key];
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(join(path, key), "expected a non-negative integer");
}

std::vector<Point> parse_points(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(as_point(j[i], dim, index_path(path, i)));
  return pts;
}

ReferenceMeasure parse_reference(json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind")) j["kind"] = "finite";
  const std::string kind = as_string(j["kind"], join(path, "kind"));
  if (kind == "finite") {
    const std::size_t dim = unsigned_or(j, "dim", 1, path);
    if (dim == 0) throw ConfigError(join(path, "dim"), "must be >= 1");
    auto atoms = parse_points(require(j, "atoms", path), dim, join(path, "atoms"));
    std::vector<double> weights;
    if (!j.contains("weights")) {
      weights.assign(atoms.size(), 1.0);
      j["weights"] = weights;
    } else {
      const json& w = j["weights"];
      if (!w.is_array() || w.size() != atoms.size()) {
        throw ConfigError(join(path, "weights"), "expected one weight per atom");
      }
      for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(positive(w[i], index_path(join(path, "weights"), i)));
    }
    try {
      return ReferenceMeasure::finite(dim, std::move(atoms), std::move(weights));
    } catch (const InvalidArgument& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (kind == "lebesgue") {
    const std::size_t dim = unsigned_or(j, "dim", 1, path);
    if (dim == 0) throw ConfigError(join(path, "dim"), "must be >= 1");
    return ReferenceMeasure::lebesgue(dim);
  }
  if (kind == "lebesgue_box") {
    const json& lo = require(j, "lo", path);
    const std::size_t dim = lo.is_array() ? lo.size() : 1;
    if (dim == 0) throw ConfigError(join(path, "lo"), "expected a point");
    j["dim"] = dim;
    return ReferenceMeasure::lebesgue_box(parse_box(j, dim, path));
  }
  throw ConfigError(join(path, "kind"), "unknown reference kind '" + kind + "'");
}

ConfinementFn parse_confinement(json& j, std::size_t dim, const std::string& path) {
  auto leaf = [dim](const NameParam& np, json& obj, const std::string& p) -> ConfinementFn {
    try {
      if (np.name == "zero") {
        no_param(np, p);
        return potentials::zero_confinement();
      }
      if (np.name == "constant") return potentials::constant_confinement(param_number(np, p));
      if (np.name == "power") return potentials::power_confinement(param_number(np, p));
      if (np.name == "hard_wall") {
        no_param(np, p);
        return potentials::hard_wall(parse_box(obj, dim, p));
      }
      if (np.name == "tabulated") {
        TabulatedGrid t = load_table(np, p);
        if (t.dim() != dim) throw ConfigError(p, "tabulated confinement must have dimension " + std::to_string(dim));
        return potentials::tabulated_confinement(std::move(t));
      }
    } catch (const InvalidArgument& e) {
      throw ConfigError(p, e.what());
    }
    throw ConfigError(p, "unknown confinement '" + np.name + "'");
  };
  return parse_spec<ConfinementFn>(j, path, leaf);
}

InteractionFn parse_interaction(json& j, std::size_t dim, const std::string& path) {
  auto leaf = [dim](const NameParam& np, json& obj, const std::string& p) -> InteractionFn {
    try {
      if (np.name == "zero") {
        no_param(np, p);
        return potentials::zero_interaction();
      }
      if (np.name == "constant") return potentials::constant_interaction(param_number(np, p));
      if (np.name == "coulomb") {
        no_param(np, p);
        return potentials::coulomb_kernel(dim);
      }
      if (np.name == "log") {
        no_param(np, p);
        return potentials::log_kernel();
      }
      if (np.name == "squared_distance") {
        no_param(np, p);
        return potentials::squared_distance();
      }
      if (np.name == "distinct") {
        no_param(np, p);
        return [](std::span<const double> x, std::span<const double> y) {
          return std::equal(x.begin(), x.end(), y.begin(), y.end()) ? 0.0 : 1.0;
        };
      }
      if (np.name == "distance_power") {
        const double q = param_number(np, p);
        if (!(q > 0.0)) throw ConfigError(p, "distance_power exponent must be positive");
        return [q](std::span<const double> x, std::span<const double> y) { return std::pow(distance(x, y), q); };
      }
      if (np.name == "tabulated_kernel" || np.name == "tabulated_pair") {
        TabulatedGrid t = load_table(np, p);
        const bool kernel = np.name == "tabulated_kernel";
        const std::size_t want = kernel ? dim : 2 * dim;
        if (t.dim() != want) throw ConfigError(p, np.name + " must have dimension " + std::to_string(want));
        return kernel ? potentials::tabulated_kernel(std::move(t)) : potentials::tabulated_pair(std::move(t));
      }
      if (np.name == "w1" || np.name == "w2" || np.name == "w3") {
        no_param(np, p);
        if (!obj.is_object() || obj.empty()) {
          throw ConfigError(p, np.name + " needs an object with \"h\" and \"region\"");
        }
        using potentials::MaskKind;
        const MaskKind kind = np.name == "w1" ? MaskKind::kW1 : np.name == "w2" ? MaskKind::kW2 : MaskKind::kW3;
        if (!obj.contains("h")) throw ConfigError(join(p, "h"), "missing required field");
        InteractionFn h = parse_interaction(obj["h"], dim, join(p, "h"));
        const auto region = parse_region(require(obj, "region", p), dim, join(p, "region"));
        const auto samples = unsigned_or(obj, "segment_samples", 1000, p);
        if (samples < 2) throw ConfigError(join(p, "segment_samples"), "must be >= 2");
        return potentials::masked_interaction(kind, std::move(h), region, static_cast<int>(samples));
      }
    } catch (const InvalidArgument& e) {
      throw ConfigError(p, e.what());
    }
    throw ConfigError(p, "unknown interaction '" + np.name + "'");
  };
  return parse_spec<InteractionFn>(j, path, leaf);
}

PotentialPair parse_potential(json& j, const ReferenceMeasure* ell, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::size_t dim = unsigned_or(j, "dim", ell ? ell->dim() : 1, path);
  if (dim == 0) throw ConfigError(join(path, "dim"), "must be >= 1");
  if (ell && ell->dim() != dim) throw ConfigError(join(path, "dim"), "does not match the reference dimension");
  if (!j.contains("confinement")) j["confinement"] = "zero";
  if (!j.contains("interaction")) j["interaction"] = "zero";
  ConfinementFn v = parse_confinement(j["confinement"], dim, join(path, "confinement"));
  InteractionFn w = parse_interaction(j["interaction"], dim, join(path, "interaction"));
  const std::string name = spec_name(j["confinement"]) + " | " + spec_name(j["interaction"]);

  PotentialPair pair;
  if (j.contains("normalize") && !(j["normalize"].is_boolean() && !j["normalize"].get<bool>())) {
    if (!ell) throw ConfigError(join(path, "normalize"), "needs a reference measure");
    ConfinementFn v1 = potentials::zero_confinement();
    if (j["normalize"].is_object()) {
      json& nj = j["normalize"];
      if (!nj.contains("v1")) nj["v1"] = "zero";
      v1 = parse_confinement(nj["v1"], dim, join(path, "normalize.v1"));
    } else if (!j["normalize"].is_boolean()) {
      throw ConfigError(join(path, "normalize"), "expected a boolean or {\"v1\": spec}");
    }
    try {
      pair = potentials::normalize_pair(dim, std::move(v1), std::move(v), std::move(w), *ell);
    } catch (const Error& e) {
      throw ConfigError(join(path, "normalize"), e.what());
    }
    pair.name = "normalized(" + name + ")";
  } else {
    pair.dim = dim;
    pair.confinement_fn = std::move(v);
    pair.interaction_fn = std::move(w);
    pair.name = name;
  }
  if (j.contains("symmetric")) {
    if (!j["symmetric"].is_boolean()) throw ConfigError(join(path, "symmetric"), "expected a boolean");
    pair.symmetric = j["symmetric"].get<bool>();
  } else {
    j["symmetric"] = pair.symmetric;
  }
  if (j.contains("lower_bound_c")) pair.lower_bound_c = as_number(j["lower_bound_c"], join(path, "lower_bound_c"));
  if (j.contains("eps1")) pair.eps1 = positive(j["eps1"], join(path, "eps1"));
  if (j.contains("c1_bound")) pair.c1_bound = as_number(j["c1_bound"], join(path, "c1_bound"));
  return pair;
}

ScheduleSpec parse_schedule(json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind")) j["kind"] = "n";
  const std::string kind = as_string(j["kind"], join(path, "kind"));
  const json& nl = require(j, "n_list", path);
  if (!nl.is_array() || nl.empty()) throw ConfigError(join(path, "n_list"), "expected a non-empty array");
  std::vector<std::size_t> ns;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    if (!nl[i].is_number_integer() || nl[i].get<std::int64_t>() <= 0) {
      throw ConfigError(index_path(join(path, "n_list"), i), "expected a positive integer");
    }
    ns.push_back(nl[i].get<std::size_t>());
  }
  try {
    return ScheduleSpec(kind, std::move(ns));
  } catch (const Error& e) {
    throw ConfigError(join(path, "kind"), e.what());
  }
}

ScalarFn parse_scalar_field(json& j, std::size_t dim, const std::string& path) {
  if (j.is_object()) {
    const json& t = require(j, "table", path);
    const std::string tp = join(path, "table");
    auto pts = parse_points(require(t, "points", tp), dim, join(tp, "points"));
    const json& vals = require(t, "values", tp);
    if (!vals.is_array() || vals.size() != pts.size()) {
      throw ConfigError(join(tp, "values"), "expected one value per point");
    }
    auto table = std::make_shared<std::map<Point, double>>();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      (*table)[pts[i]] = as_number(vals[i], index_path(join(tp, "values"), i));
    }
    return [table](std::span<const double> x) {
      auto it = table->find(Point(x.begin(), x.end()));
      if (it == table->end()) throw InvalidArgument("table field: no value at " + format_point(x));
      return it->second;
    };
  }
  const NameParam np = split_name(as_string(j, path));
  if (np.name == "coordinate") {
    const double k = param_number(np, path);
    if (k < 1 || k > static_cast<double>(dim) || k != std::floor(k)) {
      throw ConfigError(path, "coordinate index must be in 1.." + std::to_string(dim));
    }
    const std::size_t i = static_cast<std::size_t>(k) - 1;
    return [i](std::span<const double> x) { return x[i]; };
  }
  if (np.name == "norm") {
    no_param(np, path);
    return [](std::span<const double> x) { return norm(x); };
  }
  if (np.name == "norm_power") {
    const double q = param_number(np, path);
    if (!(q > 0.0)) throw ConfigError(path, "norm_power exponent must be positive");
    return [q](std::span<const double> x) { return std::pow(norm(x), q); };
  }
  if (np.name == "constant") {
    const double c = param_number(np, path);
    return [c](std::span<const double>) { return c; };
  }
  throw ConfigError(path, "unknown scalar field '" + np.name + "'");
}

TestFunctional parse_functional(json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind")) j["kind"] = "zero";
  const std::string kind = as_string(j["kind"], join(path, "kind"));
  const double offset = number_or(j, "offset", 0.0, path);
  auto g_text = [&] { return j["g"].is_string() ? j["g"].get<std::string>() : std::string("table"); };
  TestFunctional f = TestFunctional::zero();
  if (kind == "zero") {
  } else if (kind == "linear") {
    if (!j.contains("g")) throw ConfigError(join(path, "g"), "missing required field");
    f = TestFunctional::linear(parse_scalar_field(j["g"], dim, join(path, "g")), g_text());
  } else if (kind == "tanh_moment") {
    if (!j.contains("g")) throw ConfigError(join(path, "g"), "missing required field");
    const double c = number_or(j, "c", 1.0, path);
    f = TestFunctional::tanh_moment(c, parse_scalar_field(j["g"], dim, join(path, "g")), g_text());
  } else if (kind == "bl_ball") {
    if (!j.contains("target")) throw ConfigError(join(path, "target"), "missing required field");
    DiscreteMeasure target = parse_measure(j["target"], join(path, "target"));
    if (target.dim() != dim) throw ConfigError(join(path, "target"), "dimension mismatch");
    const double r = positive(require(j, "radius", path), join(path, "radius"));
    const double h = number_or(j, "height", 1.0, path);
    f = TestFunctional::bl_ball(std::move(target), r, h);
  } else {
    throw ConfigError(join(path, "kind"), "unknown functional kind '" + kind + "'");
  }
  return offset == 0.0 ? f : f.shifted(offset);
}

GridSpec parse_grid(json& j, const ReferenceMeasure& ell, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind")) j["kind"] = "reference";
  const std::string kind = as_string(j["kind"], join(path, "kind"));
  try {
    if (kind == "reference") {
      if (!ell.is_finite()) throw ConfigError(join(path, "kind"), "'reference' grid needs a finite reference");
      return GridSpec::from_reference(ell);
    }
    if (kind == "box") {
      const Box b = parse_box(j, ell.dim(), path);
      const double h = positive(require(j, "step", path), join(path, "step"));
      const auto cap = unsigned_or(j, "cap", 200000, path);
      return GridSpec::box(b.lo, b.hi, h, cap);
    }
    if (kind == "nodes") {
      return GridSpec::explicit_nodes(ell.dim(), parse_points(require(j, "nodes", path), ell.dim(), join(path, "nodes")));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"), "unknown grid kind '" + kind + "'");
}

DiscreteMeasure parse_measure(json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::size_t dim = unsigned_or(j, "dim", 1, path);
  if (dim == 0) throw ConfigError(join(path, "dim"), "must be >= 1");
  auto atoms = parse_points(require(j, "atoms", path), dim, join(path, "atoms"));
  std::vector<double> w;
  if (!j.contains("weights")) {
    w.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  } else {
    const json& wj = j["weights"];
    if (!wj.is_array() || wj.size() != atoms.size()) throw ConfigError(join(path, "weights"), "expected one weight per atom");
    for (std::size_t i = 0; i < wj.size(); ++i) w.push_back(as_number(wj[i], index_path(join(path, "weights"), i)));
  }
  try {
    return DiscreteMeasure(dim, std::move(atoms), std::move(w));
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

WeightFunction parse_weight_function(json& j, const std::string& path) {
  const NameParam np = split_name(as_string(j, path));
  if (np.name == "norm_power") {
    const double q = param_number(np, path);
    if (!(q > 0.0)) throw ConfigError(path, "norm_power exponent must be positive");
    return WeightFunction::norm_power(q);
  }
  if (np.name == "one_plus_norm") {
    no_param(np, path);
    return WeightFunction::one_plus_norm();
  }
  throw ConfigError(path, "unknown weight function '" + np.name + "'");
}

VariationalOptions parse_variational(json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  VariationalOptions o;
  o.tol = number_or(j, "tol", o.tol, path);
  if (!(o.tol > 0.0)) throw ConfigError(join(path, "tol"), "must be positive");
  o.max_iter = unsigned_or(j, "max_iter", o.max_iter, path);
  o.starts = unsigned_or(j, "starts", o.starts, path);
  if (o.starts == 0) throw ConfigError(join(path, "starts"), "must be >= 1");
  if (!j.contains("rate")) j["rate"] = "auto";
  const std::string rate = as_string(j["rate"], join(path, "rate"));
  if (rate != "auto" && rate != "I" && rate != "J") throw ConfigError(join(path, "rate"), "expected \"auto\", \"I\" or \"J\"");
  return o;
}

SamplerSettings parse_sampler(json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  SamplerSettings s;
  SamplerConfig& c = s.config;
  c.n = unsigned_or(j, "n", c.n, path);
  if (c.n == 0) throw ConfigError(join(path, "n"), "must be >= 1");
  if (j.contains("beta_n")) s.beta_n = positive(j["beta_n"], join(path, "beta_n"));
  if (!j.contains("proposal")) j["proposal"] = "single_site";
  const std::string prop = as_string(j["proposal"], join(path, "proposal"));
  if (prop == "single_site") {
    c.proposal = SamplerConfig::Proposal::kSingleSite;
  } else if (prop == "random_walk") {
    c.proposal = SamplerConfig::Proposal::kRandomWalk;
  } else {
    throw ConfigError(join(path, "proposal"), "expected \"single_site\" or \"random_walk\"");
  }
  c.sigma = number_or(j, "sigma", c.sigma, path);
  if (!(c.sigma > 0.0)) throw ConfigError(join(path, "sigma"), "must be positive");
  c.burn_in = unsigned_or(j, "burn_in", c.burn_in, path);
  c.thinning = unsigned_or(j, "thinning", c.thinning, path);
  s.samples = unsigned_or(j, "samples", s.samples, path);
  s.chains = unsigned_or(j, "chains", s.chains, path);
  if (s.samples == 0) throw ConfigError(join(path, "samples"), "must be >= 1");
  if (s.chains == 0) throw ConfigError(join(path, "chains"), "must be >= 1");
  if (j.contains("exact")) {
    if (!j["exact"].is_boolean()) throw ConfigError(join(path, "exact"), "expected a boolean");
    s.exact = j["exact"].get<bool>();
  } else {
    j["exact"] = false;
  }
  if (j.contains("init")) {
    auto pts = parse_points(j["init"], dim, join(path, "init"));
    if (pts.size() != c.n) throw ConfigError(join(path, "init"), "expected n points");
    c.init = ParticleConfig(dim, std::move(pts));
  }
  return s;
}

harness::ConcentrationOptions parse_concentration(json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  harness::ConcentrationOptions o;
  if (!j.contains("distance")) j["distance"] = "d_bl";
  const std::string d = as_string(j["distance"], join(path, "distance"));
  if (d == "d_bl") {
    o.distance = harness::DistanceKind::kBoundedLipschitz;
  } else if (d == "d_psi") {
    o.distance = harness::DistanceKind::kPsi;
    if (!j.contains("psi")) throw ConfigError(join(path, "psi"), "d_psi needs a weight function");
    o.psi = parse_weight_function(j["psi"], join(path, "psi"));
  } else if (d == "wasserstein_p") {
    o.distance = harness::DistanceKind::kWasserstein;
  } else {
    throw ConfigError(join(path, "distance"), "unknown distance '" + d + "'");
  }
  o.p = number_or(j, "p", o.p, path);
  if (!(o.p >= 1.0)) throw ConfigError(join(path, "p"), "must be >= 1");
  o.chains = unsigned_or(j, "chains", o.chains, path);
  o.samples_per_chain = unsigned_or(j, "samples_per_chain", o.samples_per_chain, path);
  if (o.chains == 0 || o.samples_per_chain == 0) throw ConfigError(path, "chains and samples_per_chain must be >= 1");
  o.burn_in = unsigned_or(j, "burn_in", o.burn_in, path);
  o.thinning = unsigned_or(j, "thinning", o.thinning, path);
  o.sigma0 = number_or(j, "sigma0", o.sigma0, path);
  if (!(o.sigma0 > 0.0)) throw ConfigError(join(path, "sigma0"), "must be positive");
  o.sigma_power = number_or(j, "sigma_power", o.sigma_power, path);
  return o;
}

assumptions::ProbePlan parse_probe(json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind")) j["kind"] = "grid";
  const std::string kind = as_string(j["kind"], join(path, "kind"));
  const Box b = parse_box(j, dim, path);
  if (kind == "grid") {
    const auto k = unsigned_or(j, "points_per_axis", 21, path);
    if (k < 2) throw ConfigError(join(path, "points_per_axis"), "must be >= 2");
    return assumptions::ProbePlan::grid(b, k);
  }
  if (kind == "random") {
    const auto count = unsigned_or(j, "count", 200, path);
    const auto seed = unsigned_or(j, "seed", 0, path);
    return assumptions::ProbePlan::random(b, count, seed);
  }
  throw ConfigError(join(path, "kind"), "unknown probe kind '" + kind + "'");
}

namespace {

json entry(const std::string& name, const std::string& description, json example) {
  return {{"name", name}, {"description", description}, {"example", std::move(example)}};
}

json sorted(std::vector<json> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const json& a, const json& b) { return a["name"].get<std::string>() < b["name"].get<std::string>(); });
  return json(entries);
}

}  // namespace

json catalog() {
  const json unit_box = {{"box", {{"lo", {-1.0}}, {"hi", {1.0}}}}};
  auto mask = [&](const std::string& n) {
    return json{{"name", n}, {"h", "squared_distance"}, {"region", unit_box}};
  };
  json c;
  c["confinements"] = sorted({
      entry("constant:c", "V = c", "constant:0.5"),
      entry("hard_wall", "V = 0 on the box [lo, hi], +inf outside", {{"name", "hard_wall"}, {"lo", {-1.0}}, {"hi", {1.0}}}),
      entry("power:p", "V(x) = ||x||^p, p > 1", "power:2"),
      entry("tabulated:path", "V from a CSV or binary grid file over R^d", "tabulated:grid.csv"),
      entry("zero", "V = 0", "zero"),
  });
  c["interactions"] = sorted({
      entry("constant:c", "W = c", "constant:1"),
      entry("coulomb", "Coulomb kernel: -|x-y| (d=1), -log|x-y| (d=2), |x-y|^(2-d) (d>2)", "coulomb"),
      entry("distance_power:p", "W(x, y) = |x-y|^p", "distance_power:1"),
      entry("distinct", "W(x, y) = 1 when x != y, 0 on the diagonal", "distinct"),
      entry("log", "W(x, y) = -log|x-y| in any dimension", "log"),
      entry("squared_distance", "W(x, y) = |x-y|^2", "squared_distance"),
      entry("tabulated_kernel:path", "W(x, y) = T(x - y), T a grid file over R^d", "tabulated_kernel:grid.csv"),
      entry("tabulated_pair:path", "W(x, y) = T(x, y), T a grid file over R^{2d}", "tabulated_pair:grid.csv"),
      entry("w1", "h on O x O, 0 elsewhere", mask("w1")),
      entry("w2", "h when both points lie in O or both in the exterior of O", mask("w2")),
      entry("w3", "h when the segment [x, y] misses the closed region", mask("w3")),
      entry("zero", "W = 0", "zero"),
  });
  c["references"] = sorted({
      entry("finite", "atoms with positive weights (exact enumeration)",
            {{"kind", "finite"}, {"dim", 1}, {"atoms", {-1.0, 0.0, 1.0}}, {"weights", {1.0, 1.0, 1.0}}}),
      entry("lebesgue", "Lebesgue measure on R^d", {{"kind", "lebesgue"}, {"dim", 1}}),
      entry("lebesgue_box", "Lebesgue measure on a box", {{"kind", "lebesgue_box"}, {"lo", {-1.0}}, {"hi", {1.0}}}),
  });
  c["schedules"] = sorted({
      entry("n", "beta_n = n (entropic rate I)", {{"kind", "n"}, {"n_list", {2, 4, 8}}}),
      entry("n^2", "beta_n = n^2 (energy rate J)", {{"kind", "n^2"}, {"n_list", {2, 4, 8}}}),
      entry("nlogn", "beta_n = n log n (energy rate J)", {{"kind", "nlogn"}, {"n_list", {2, 4, 8}}}),
      entry("expression", "any arithmetic expression in n with beta_n / n increasing",
            {{"kind", "n^1.5"}, {"n_list", {2, 4, 8}}}),
  });
  c["metrics"] = sorted({
      entry("d_bl", "bounded-Lipschitz distance, ||f||_BL = max(Lip f, 2 sup|f|)", {{"distance", "d_bl"}}),
      entry("d_psi", "d_bl plus the difference of psi-integrals",
            {{"distance", "d_psi"}, {"psi", "norm_power:2"}}),
      entry("wasserstein_p", "optimal transport cost with |x-y|^p", {{"distance", "wasserstein_p"}, {"p", 2}}),
  });
  c["weight_functions"] = sorted({
      entry("norm_power:q", "psi(x) = ||x||^q", "norm_power:2"),
      entry("one_plus_norm", "psi(x) = 1 + ||x||", "one_plus_norm"),
  });
  c["scalar_fields"] = sorted({
      entry("constant:c", "g = c", "constant:1"),
      entry("coordinate:i", "g(x) = x_i, 1-based", "coordinate:1"),
      entry("norm", "g(x) = ||x||", "norm"),
      entry("norm_power:q", "g(x) = ||x||^q", "norm_power:2"),
      entry("table", "g given on a list of points", {{"table", {{"points", {0.0, 1.0}}, {"values", {0.0, 1.0}}}}}),
  });
  c["functionals"] = sorted({
      entry("bl_ball", "f = height * max(0, 1 - d_bl(mu, target) / radius)",
            {{"kind", "bl_ball"}, {"target", {{"dim", 1}, {"atoms", {0.0}}}}, {"radius", 0.5}, {"height", 1.0}}),
      entry("linear", "f = int g dmu", {{"kind", "linear"}, {"g", "coordinate:1"}}),
      entry("tanh_moment", "f = c tanh(int g dmu)", {{"kind", "tanh_moment"}, {"c", 1.0}, {"g", "coordinate:1"}}),
      entry("zero", "f = 0", {{"kind", "zero"}}),
  });
  c["commands"] = {"catalog", "check-assumptions", "concentration", "laplace", "metrics", "minimize", "phi", "sample"};
  return c;
}

std::string catalog_text() {
  const json c = catalog();
  std::ostringstream os;
  for (const auto& [section, entries] : c.items()) {
    os << section << ":\n";
    for (const auto& e : entries) {
      if (e.is_string()) {
        os << "  " << e.get<std::string>() << '\n';
      } else {
        os << "  " << e["name"].get<std::string>() << "  " << e["description"].get<std::string>() << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace gibbslab::config
