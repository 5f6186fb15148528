// gibbslab command-line front end. One run per process; see README for the
// config format. Settings resolve as config < environment < flag.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbslab/assumptions.hpp"
#include "gibbslab/config.hpp"
#include "gibbslab/functionals.hpp"
#include "gibbslab/harness.hpp"
#include "gibbslab/sampler.hpp"
#include "gibbslab/superlinear.hpp"
#include "gibbslab/variational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gibbslab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBudget = 4;

struct Run {
  std::string command;
  json cfg = json::object();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t budget = enumeration::kDefaultBudget;
  fs::path out = "out";
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("out", "cannot write " + p.string());
  os << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  return v;
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config", "top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse error: ") + e.what());
  }
}

json& section(Run& r, const std::string& key) {
  if (!r.cfg.contains(key)) r.cfg[key] = json::object();
  return r.cfg[key];
}

json& required_section(Run& r, const std::string& key) {
  if (!r.cfg.contains(key)) throw ConfigError(key, "missing required section");
  return r.cfg[key];
}

enumeration::Options enum_opts(const Run& r) { return {r.budget, r.threads}; }

VariationalOptions variational_opts(Run& r, std::optional<TestFunctional> tilt = {}) {
  VariationalOptions o = config::parse_variational(section(r, "variational"));
  o.seed = r.seed;
  o.threads = r.threads;
  o.tilt = std::move(tilt);
  return o;
}

std::string rate_choice(Run& r, const ReferenceMeasure& ell) {
  std::string rate = r.cfg["variational"]["rate"].get<std::string>();
  if (rate == "auto") rate = ell.is_finite() ? "I" : "J";
  return rate;
}

json cmd_sample(Run& r) {
  ReferenceMeasure ell = config::parse_reference(required_section(r, "reference"));
  PotentialPair pair = config::parse_potential(required_section(r, "potential"), &ell);
  auto s = config::parse_sampler(required_section(r, "sampler"), ell.dim());
  double beta;
  if (s.beta_n) {
    beta = *s.beta_n;
  } else {
    json& sch = section(r, "schedule");
    if (!sch.contains("n_list")) sch["n_list"] = {s.config.n};
    beta = config::parse_schedule(sch).beta(s.config.n);
    r.cfg["sampler"]["beta_n"] = beta;
  }
  s.config.beta_n = beta;
  s.config.seed = r.seed;

  std::vector<ChainResult> chains;
  if (s.exact) {
    if (!ell.is_finite()) throw ConfigError("sampler.exact", "exact sampling needs a finite reference");
    ChainResult c;
    c.samples = exact_sample_finite(pair, ell, s.config.n, beta, r.seed, s.samples * s.chains, enum_opts(r));
    for (std::size_t k = 0; k < c.samples.size(); ++k) {
      c.diagnostics.kept_sweeps.push_back(k);
      c.diagnostics.energy.push_back(functionals::hamiltonian(c.samples[k], pair));
    }
    chains.push_back(std::move(c));
  } else {
    chains = mh_sample_chains(pair, ell, s.config, s.samples, s.chains, r.threads);
    std::ofstream diag(r.out / "diagnostics.csv", std::ios::binary);
    write_diagnostics_csv(diag, chains);
  }
  std::ofstream samples(r.out / "samples.jsonl", std::ios::binary);
  write_samples_jsonl(samples, chains);

  json per_chain = json::array();
  for (const auto& c : chains) {
    per_chain.push_back({{"samples", c.samples.size()},
                         {"acceptance_rate", c.diagnostics.acceptance_rate},
                         {"energy_ess", c.diagnostics.energy_ess},
                         {"init_attempts", c.diagnostics.init_attempts},
                         {"mean_energy", [&] {
                            double m = 0.0;
                            for (double e : c.diagnostics.energy) m += e;
                            return c.diagnostics.energy.empty() ? 0.0 : m / static_cast<double>(c.diagnostics.energy.size());
                          }()}});
  }
  return {{"mode", s.exact ? "exact" : "metropolis_hastings"},
          {"n", s.config.n},
          {"beta_n", beta},
          {"potential", pair.name},
          {"chains", per_chain}};
}

json cmd_minimize(Run& r) {
  ReferenceMeasure ell = config::parse_reference(required_section(r, "reference"));
  PotentialPair pair = config::parse_potential(required_section(r, "potential"), &ell);
  GridSpec grid = config::parse_grid(section(r, "grid"), ell);
  std::optional<TestFunctional> tilt;
  if (r.cfg.contains("functional")) tilt = config::parse_functional(r.cfg["functional"], ell.dim());
  VariationalOptions o = variational_opts(r, tilt);
  const std::string rate = rate_choice(r, ell);
  const MinimizationResult m = rate == "I" ? minimize_I(pair, ell, grid, o) : minimize_J(pair, grid, o);
  std::ofstream table(r.out / "table.csv", std::ios::binary);
  write_csv(table, m.minimizer);
  json j = to_json(m);
  j["rate"] = rate;
  j["potential"] = pair.name;
  return j;
}

json cmd_laplace(Run& r) {
  ReferenceMeasure ell = config::parse_reference(required_section(r, "reference"));
  if (!ell.is_finite()) throw ConfigError("reference.kind", "laplace needs a finite reference");
  PotentialPair pair = config::parse_potential(required_section(r, "potential"), &ell);
  TestFunctional f = config::parse_functional(section(r, "functional"), ell.dim());
  ScheduleSpec schedule = config::parse_schedule(required_section(r, "schedule"));
  harness::LaplaceOptions o;
  o.enumeration = enum_opts(r);
  o.variational = variational_opts(r);
  if (r.cfg.contains("grid")) o.grid = config::parse_grid(r.cfg["grid"], ell);
  const auto report = harness::laplace_vs_rate(pair, ell, f, schedule, o);
  std::ofstream table(r.out / "table.csv", std::ios::binary);
  harness::write_csv(table, report);
  return harness::to_json(report);
}

json cmd_concentration(Run& r) {
  ReferenceMeasure ell = config::parse_reference(required_section(r, "reference"));
  PotentialPair pair = config::parse_potential(required_section(r, "potential"), &ell);
  ScheduleSpec schedule = config::parse_schedule(required_section(r, "schedule"));
  json& cj = section(r, "concentration");
  harness::ConcentrationOptions o = config::parse_concentration(cj);
  o.seed = r.seed;
  o.threads = r.threads;
  if (!cj.contains("target")) cj["target"] = "minimizer";
  std::optional<DiscreteMeasure> target;
  json minimizer_json;
  if (cj["target"].is_string()) {
    if (cj["target"].get<std::string>() != "minimizer") {
      throw ConfigError("concentration.target", "expected a measure or \"minimizer\"");
    }
    GridSpec grid = config::parse_grid(section(r, "grid"), ell);
    VariationalOptions vo = variational_opts(r);
    const std::string rate = schedule.is_linear() ? "I" : "J";
    const MinimizationResult m = rate == "I" ? minimize_I(pair, ell, grid, vo) : minimize_J(pair, grid, vo);
    target = m.minimizer;
    minimizer_json = {{"rate", rate}, {"value", m.value}, {"converged", m.converged}, {"local", m.local}};
  } else {
    target = config::parse_measure(cj["target"], "concentration.target");
  }
  const auto report = harness::concentration_experiment(pair, ell, schedule, *target, o);
  std::ofstream table(r.out / "table.csv", std::ios::binary);
  harness::write_csv(table, report);
  json j = harness::to_json(report);
  if (!minimizer_json.is_null()) j["target_minimization"] = minimizer_json;
  return j;
}

json cmd_phi(Run& r) {
  json& pj = required_section(r, "phi");
  if (!pj.contains("nu")) throw ConfigError("phi.nu", "missing required field");
  DiscreteMeasure nu = config::parse_measure(pj["nu"], "phi.nu");
  if (!pj.contains("psi_bar")) pj["psi_bar"] = "norm";
  ScalarField psi = config::parse_scalar_field(pj["psi_bar"], nu.dim(), "phi.psi_bar");
  const std::size_t k = config::unsigned_or(pj, "max_slope", 8, "phi");
  if (k == 0) throw ConfigError("phi.max_slope", "must be >= 1");
  const SuperlinearFunction phi = construct_phi(nu, psi, k);
  const PhiMomentReport m = phi_moment_check(phi, nu, psi);
  return {{"phi", to_json(phi)}, {"moment", {{"integral", m.integral}, {"bound", m.bound}, {"holds", m.holds()}}}};
}

json cmd_metrics(Run& r) {
  json& mj = required_section(r, "metrics");
  if (!mj.contains("mu")) throw ConfigError("metrics.mu", "missing required field");
  if (!mj.contains("nu")) throw ConfigError("metrics.nu", "missing required field");
  DiscreteMeasure mu = config::parse_measure(mj["mu"], "metrics.mu");
  DiscreteMeasure nu = config::parse_measure(mj["nu"], "metrics.nu");
  if (mu.dim() != nu.dim()) throw ConfigError("metrics.nu", "dimension differs from metrics.mu");
  const double p = config::number_or(mj, "p", 2.0, "metrics");
  if (!(p >= 1.0)) throw ConfigError("metrics.p", "must be >= 1");
  if (!mj.contains("psi")) mj["psi"] = "norm_power:2";
  const WeightFunction psi = config::parse_weight_function(mj["psi"], "metrics.psi");
  json j = {{"d_bl", d_bl(mu, nu)},
            {"d_bl_lp", d_bl(mu, nu, BlMethod::kLinearProgram)},
            {"d_bl_flow", d_bl(mu, nu, BlMethod::kNetworkFlow)},
            {"d_psi", d_psi(mu, nu, psi)},
            {"psi", psi.name()},
            {"p", p},
            {"wasserstein_p", wasserstein_p(mu, nu, p)}};
  if (mu.dim() == 1) j["wasserstein_p_quantile"] = wasserstein_p(mu, nu, p, TransportMethod::kQuantile);

  if (r.cfg.contains("potential")) {
    std::optional<ReferenceMeasure> ell;
    if (r.cfg.contains("reference")) ell = config::parse_reference(r.cfg["reference"]);
    PotentialPair pair = config::parse_potential(r.cfg["potential"], ell ? &*ell : nullptr);
    json fj;
    auto report = [&](const std::string& name, const FunctionalValue& v) {
      fj[name] = to_json(v);
      std::cout << name << "(mu) = " << v.value;
      for (const auto& [k, x] : v.breakdown) std::cout << "  " << k << " = " << x;
      std::cout << '\n';
    };
    report("J", functionals::rate_J(mu, pair));
    if (ell && ell->is_finite()) report("I", functionals::rate_I(mu, pair, *ell));
    j["functionals"] = fj;
  }
  return j;
}

json cmd_check(Run& r) {
  std::optional<ReferenceMeasure> ell;
  if (r.cfg.contains("reference")) ell = config::parse_reference(r.cfg["reference"]);
  PotentialPair pair = config::parse_potential(required_section(r, "potential"), ell ? &*ell : nullptr);
  json& cj = section(r, "check");
  if (!cj.contains("probe")) throw ConfigError("check.probe", "missing required field");
  const assumptions::ProbePlan probe = config::parse_probe(cj["probe"], pair.dim, "check.probe");
  if (!cj.contains("assumptions")) cj["assumptions"] = {"B1", "C1"};
  if (!cj["assumptions"].is_array()) throw ConfigError("check.assumptions", "expected an array");
  json out = json::array();
  for (std::size_t i = 0; i < cj["assumptions"].size(); ++i) {
    const std::string path = "check.assumptions[" + std::to_string(i) + "]";
    if (!cj["assumptions"][i].is_string()) throw ConfigError(path, "expected a string");
    const std::string a = cj["assumptions"][i].get<std::string>();
    if (a == "B1") {
      out.push_back(to_json(assumptions::check_B1(pair, probe, pair.lower_bound_c)));
    } else if (a == "C1") {
      const double eps1 = config::number_or(cj, "eps1", pair.eps1.value_or(0.5), "check");
      const auto rep = assumptions::check_C1(pair, eps1, probe, pair.c1_bound);
      json j = to_json(rep.coupled);
      j["confinement_min"] = rep.confinement_min;
      out.push_back(j);
    } else if (a == "C2") {
      if (!cj.contains("gamma")) cj["gamma"] = "0";
      const std::string text = cj["gamma"].is_string() ? cj["gamma"].get<std::string>() : "";
      std::shared_ptr<Expression> gamma;
      try {
        gamma = std::make_shared<Expression>(text);
      } catch (const Error& e) {
        throw ConfigError("check.gamma", e.what());
      }
      out.push_back(to_json(assumptions::check_C2(
          pair, [gamma](double s) { return (*gamma)({{"r", s}}); }, probe)));
    } else if (a == "A2") {
      if (!ell) throw ConfigError("reference", "A2 needs a reference measure");
      const auto rep = assumptions::check_A2(pair, *ell);
      out.push_back({{"assumption", "A2"}, {"mass", rep.mass}, {"deviation", rep.deviation}, {"passed", rep.passed()}});
    } else if (a == "D") {
      if (!ell) throw ConfigError("reference", "D needs a reference measure");
      if (!cj.contains("v1")) cj["v1"] = "zero";
      ConfinementFn v1 = config::parse_confinement(cj["v1"], pair.dim, "check.v1");
      const auto rep = assumptions::check_D(v1, pair.confinement_fn, pair.interaction_fn, *ell, probe);
      json j = to_json(rep.coupled);
      j["assumption"] = "D";
      j["log_normalizer"] = rep.log_normalizer;
      j["integrable"] = rep.integrable;
      out.push_back(j);
    } else {
      throw ConfigError(path, "unknown assumption '" + a + "'");
    }
  }
  return {{"potential", pair.name}, {"reports", out}};
}

json dispatch(Run& r) {
  if (r.command == "sample") return cmd_sample(r);
  if (r.command == "minimize") return cmd_minimize(r);
  if (r.command == "laplace") return cmd_laplace(r);
  if (r.command == "concentration") return cmd_concentration(r);
  if (r.command == "phi") return cmd_phi(r);
  if (r.command == "metrics") return cmd_metrics(r);
  if (r.command == "check-assumptions") return cmd_check(r);
  throw ConfigError("command", "unknown command '" + r.command + "'");
}

int fail(const fs::path& out, int code, const std::string& kind, const std::string& message,
         const std::string& field = "") {
  json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
  if (!field.empty()) e["field"] = field;
  std::cerr << e.dump() << '\n';
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!ec) {
    std::ofstream os(out / "error.json", std::ios::binary);
    if (os) os << e.dump(2) << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs point process experiments: sampling, variational problems, exact Laplace functionals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  std::optional<std::string> seed_flag, threads_flag, budget_flag, out_flag;
  bool catalog_json = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sample", "draw configurations from the Gibbs law"},
      {"minimize", "minimize the rate functional I or J on a grid"},
      {"laplace", "exact Laplace functional against the variational reference"},
      {"concentration", "distance of sampled empirical measures to a target, per n"},
      {"phi", "construct a superlinear tightness function"},
      {"metrics", "d_bl, d_psi and Wasserstein cost between two measures"},
      {"check-assumptions", "sampled checks of the potential assumptions"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->add_option("--config", config_path, "JSON run configuration")->required();
    sc->add_option("--seed", seed_flag, "base seed (u64)");
    sc->add_option("--out", out_flag, "output directory");
    sc->add_option("--threads", threads_flag, "worker cap; results do not depend on it");
    sc->add_option("--budget", budget_flag, "enumeration budget in configurations");
  }
  CLI::App* cat = app.add_subcommand("catalog", "list built-in potentials, schedules, metrics");
  cat->add_flag("--json", catalog_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (cat->parsed()) {
    if (catalog_json) {
      std::cout << config::catalog().dump(2) << '\n';
    } else {
      std::cout << config::catalog_text();
    }
    return 0;
  }

  Run r;
  for (auto* sc : app.get_subcommands()) r.command = sc->get_name();
  if (const char* o = env("GIBBSLAB_OUT")) r.out = o;
  if (out_flag) r.out = *out_flag;

  try {
    r.cfg = load_config(config_path);
    if (r.cfg.contains("out") && r.cfg["out"].is_string() && !out_flag && !env("GIBBSLAB_OUT")) {
      r.out = r.cfg["out"].get<std::string>();
    }
    r.seed = config::unsigned_or(r.cfg, "seed", 0, "");
    r.threads = static_cast<unsigned>(config::unsigned_or(r.cfg, "threads", 1, ""));
    r.budget = config::unsigned_or(r.cfg, "budget", enumeration::kDefaultBudget, "");
    if (const char* v = env("GIBBSLAB_SEED")) r.seed = parse_u64(v, "GIBBSLAB_SEED");
    if (const char* v = env("GIBBSLAB_THREADS")) r.threads = static_cast<unsigned>(parse_u64(v, "GIBBSLAB_THREADS"));
    if (const char* v = env("GIBBSLAB_BUDGET")) r.budget = parse_u64(v, "GIBBSLAB_BUDGET");
    if (seed_flag) r.seed = parse_u64(*seed_flag, "--seed");
    if (threads_flag) r.threads = static_cast<unsigned>(parse_u64(*threads_flag, "--threads"));
    if (budget_flag) r.budget = parse_u64(*budget_flag, "--budget");
    if (r.threads == 0) throw ConfigError("threads", "must be >= 1");

    r.cfg["command"] = r.command;
    r.cfg["seed"] = r.seed;
    r.cfg["threads"] = r.threads;
    r.cfg["budget"] = r.budget;
    r.cfg["out"] = r.out.string();

    std::error_code ec;
    fs::create_directories(r.out, ec);
    if (ec) throw ConfigError("out", "cannot create '" + r.out.string() + "': " + ec.message());
    fs::remove(r.out / "error.json", ec);

    const json result = dispatch(r);
    json manifest = r.cfg;
    manifest["tool"] = {{"name", "gibbslab"}, {"version", kVersion}};
    write_json(r.out / "manifest.json", manifest);
    write_json(r.out / "result.json", result);
    return 0;
  } catch (const ConfigError& e) {
    return fail(r.out, kExitConfig, "config", e.what(), e.field());
  } catch (const BudgetExceeded& e) {
    return fail(r.out, kExitBudget, "budget", e.what());
  } catch (const InvalidArgument& e) {
    return fail(r.out, kExitConfig, "invalid_argument", e.what());
  } catch (const NumericalError& e) {
    return fail(r.out, kExitNumerical, "numerical", e.what());
  } catch (const std::exception& e) {
    return fail(r.out, kExitNumerical, "numerical", e.what());
  }
}
