#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/assumptions.hpp"
#include "gibbslab/harness.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"
#include "gibbslab/sampler.hpp"
#include "gibbslab/schedule.hpp"
#include "gibbslab/superlinear.hpp"
#include "gibbslab/test_functional.hpp"
#include "gibbslab/variational.hpp"

/// Parsing of JSON run configurations. Every parser takes the JSON node by
/// reference and writes back the defaults it applied, so after parsing the
/// node holds the fully resolved configuration. Errors are ConfigError with
/// the dotted path of the offending field.
namespace gibbslab::config {

using nlohmann::json;

/// Points as [[x1, ..., xd], ...]; for d = 1 bare numbers are accepted.
std::vector<Point> parse_points(const json& j, std::size_t dim, const std::string& path);

/// {"kind": "finite", "dim", "atoms", "weights"} | {"kind": "lebesgue", "dim"} |
/// {"kind": "lebesgue_box", "lo", "hi"}.
ReferenceMeasure parse_reference(json& j, const std::string& path = "reference");

/// Catalog name string, or an object {"name", ...parameters, "scale"}, or
/// {"sum": [spec, ...]}.
ConfinementFn parse_confinement(json& j, std::size_t dim, const std::string& path);
InteractionFn parse_interaction(json& j, std::size_t dim, const std::string& path);

/// {"dim", "confinement", "interaction", "symmetric", "lower_bound_c",
///  "eps1", "c1_bound", "normalize"}. With "normalize" the confinement is
/// replaced through normalize_pair against `ell` (which must then be given).
PotentialPair parse_potential(json& j, const ReferenceMeasure* ell, const std::string& path = "potential");

/// {"kind": "n" | "n^2" | "nlogn" | expression, "n_list": [...]}.
ScheduleSpec parse_schedule(json& j, const std::string& path = "schedule");

/// "coordinate:i" (1-based), "norm", "norm_power:q", "constant:c", or
/// {"table": {"points", "values"}} (exact point lookup).
ScalarFn parse_scalar_field(json& j, std::size_t dim, const std::string& path);

/// {"kind": "zero" | "linear" | "tanh_moment" | "bl_ball", ...,"offset"}.
TestFunctional parse_functional(json& j, std::size_t dim, const std::string& path = "functional");

/// {"kind": "reference" | "box" | "nodes", ...}. "reference" needs a finite l.
GridSpec parse_grid(json& j, const ReferenceMeasure& ell, const std::string& path = "grid");

/// {"dim", "atoms", "weights"}; weights default to uniform.
DiscreteMeasure parse_measure(json& j, const std::string& path);

/// "norm_power:q" | "one_plus_norm".
WeightFunction parse_weight_function(json& j, const std::string& path);

VariationalOptions parse_variational(json& j, const std::string& path = "variational");

/// Sampler settings. `beta_n` may be absent; the caller fills it from the
/// schedule.
struct SamplerSettings {
  SamplerConfig config;
  std::optional<double> beta_n;
  std::size_t samples = 100;
  std::size_t chains = 1;
  bool exact = false;  // categorical sampling from the enumerated law
};
SamplerSettings parse_sampler(json& j, std::size_t dim, const std::string& path = "sampler");

harness::ConcentrationOptions parse_concentration(json& j, const std::string& path = "concentration");

assumptions::ProbePlan parse_probe(json& j, std::size_t dim, const std::string& path);

/// Numeric field with a default; the default is written back into j.
double number_or(json& j, const std::string& key, double def, const std::string& path);
std::uint64_t unsigned_or(json& j, const std::string& key, std::uint64_t def, const std::string& path);
const json& require(const json& j, const std::string& key, const std::string& path);

/// Built-in names, sorted within each section. Every entry carries an
/// "example" accepted by the parser of its section.
json catalog();
std::string catalog_text();

}  // namespace gibbslab::config
