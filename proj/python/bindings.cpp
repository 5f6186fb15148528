// JSON-in, JSON-out bindings. Every structured argument is the same object the
// CLI accepts in the corresponding config section, serialized as text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "gibbslab/config.hpp"
#include "gibbslab/core.hpp"
#include "gibbslab/functionals.hpp"
#include "gibbslab/harness.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/variational.hpp"

namespace py = pybind11;
using namespace gibbslab;
using nlohmann::json;

namespace {

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, e.what());
  }
}

DiscreteMeasure measure(const std::string& text, const std::string& what) {
  json j = parse(text, what);
  return config::parse_measure(j, what);
}

BlMethod bl_method(const std::string& m) {
  if (m == "auto") return BlMethod::kAuto;
  if (m == "lp") return BlMethod::kLinearProgram;
  if (m == "flow") return BlMethod::kNetworkFlow;
  throw InvalidArgument("method must be auto, lp or flow");
}

TransportMethod transport_method(const std::string& m) {
  if (m == "auto") return TransportMethod::kAuto;
  if (m == "quantile") return TransportMethod::kQuantile;
  if (m == "lp") return TransportMethod::kLinearProgram;
  if (m == "flow") return TransportMethod::kNetworkFlow;
  throw InvalidArgument("method must be auto, quantile, lp or flow");
}

struct Model {
  ReferenceMeasure ell;
  PotentialPair pair;
};

Model model(const std::string& potential, const std::string& reference) {
  json rj = parse(reference, "reference");
  Model m{config::parse_reference(rj), {}};
  json pj = parse(potential, "potential");
  m.pair = config::parse_potential(pj, &m.ell);
  return m;
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gibbslab native core";
  m.attr("__version__") = kVersion;

  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("catalog", [] { return dump(config::catalog()); });

  m.def(
      "d_bl",
      [](const std::string& mu, const std::string& nu, const std::string& method) {
        return d_bl(measure(mu, "mu"), measure(nu, "nu"), bl_method(method));
      },
      py::arg("mu"), py::arg("nu"), py::arg("method") = "auto");

  m.def(
      "d_psi",
      [](const std::string& mu, const std::string& nu, const std::string& psi) {
        json pj = psi;
        return d_psi(measure(mu, "mu"), measure(nu, "nu"), config::parse_weight_function(pj, "psi"));
      },
      py::arg("mu"), py::arg("nu"), py::arg("psi"));

  m.def(
      "wasserstein_p",
      [](const std::string& mu, const std::string& nu, double p, const std::string& method) {
        return wasserstein_p(measure(mu, "mu"), measure(nu, "nu"), p, transport_method(method));
      },
      py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("method") = "auto");

  m.def(
      "hamiltonian",
      [](const std::vector<std::vector<double>>& points, const std::string& potential) {
        json pj = parse(potential, "potential");
        const PotentialPair pair = config::parse_potential(pj, nullptr);
        return functionals::hamiltonian(ParticleConfig(pair.dim, points), pair);
      },
      py::arg("points"), py::arg("potential"));

  m.def(
      "rate_I",
      [](const std::string& mu, const std::string& potential, const std::string& reference) {
        const Model md = model(potential, reference);
        return dump(to_json(functionals::rate_I(measure(mu, "mu"), md.pair, md.ell)));
      },
      py::arg("mu"), py::arg("potential"), py::arg("reference"));

  m.def(
      "rate_J",
      [](const std::string& mu, const std::string& potential) {
        json pj = parse(potential, "potential");
        const PotentialPair pair = config::parse_potential(pj, nullptr);
        return dump(to_json(functionals::rate_J(measure(mu, "mu"), pair)));
      },
      py::arg("mu"), py::arg("potential"));

  m.def(
      "minimize",
      [](const std::string& potential, const std::string& reference, const std::string& grid,
         const std::string& variational) {
        const Model md = model(potential, reference);
        json gj = parse(grid, "grid");
        const GridSpec g = config::parse_grid(gj, md.ell);
        json vj = parse(variational, "variational");
        const VariationalOptions o = config::parse_variational(vj);
        std::string rate = vj.value("rate", std::string("auto"));
        if (rate == "auto") rate = md.ell.is_finite() ? "I" : "J";
        const MinimizationResult r = rate == "I" ? minimize_I(md.pair, md.ell, g, o) : minimize_J(md.pair, g, o);
        json j = to_json(r);
        j["rate"] = rate;
        return dump(j);
      },
      py::arg("potential"), py::arg("reference"), py::arg("grid") = "{}", py::arg("variational") = "{}");

  m.def(
      "laplace",
      [](const std::string& potential, const std::string& reference, const std::string& functional,
         const std::string& schedule) {
        const Model md = model(potential, reference);
        if (!md.ell.is_finite()) throw ConfigError("reference.kind", "laplace needs a finite reference");
        json fj = parse(functional, "functional");
        const TestFunctional f = config::parse_functional(fj, md.ell.dim());
        json sj = parse(schedule, "schedule");
        const ScheduleSpec s = config::parse_schedule(sj);
        return dump(harness::to_json(harness::laplace_vs_rate(md.pair, md.ell, f, s, {})));
      },
      py::arg("potential"), py::arg("reference"), py::arg("functional"), py::arg("schedule"));
}
