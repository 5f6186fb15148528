#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gibbslab/config.hpp"
#include "gibbslab/functionals.hpp"

using namespace gibbslab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string field_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gibbslab_test_config_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GIBBSLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

}  // namespace

TEST_CASE("reference parsing writes back defaults") {
  json j = {{"kind", "finite"}, {"atoms", {0.0, 1.0}}};
  const auto ell = config::parse_reference(j);
  CHECK(ell.is_finite());
  CHECK(ell.weights() == std::vector<double>{1.0, 1.0});
  CHECK(j["dim"] == 1);
  CHECK(j["weights"].size() == 2);
  json b = {{"kind", "lebesgue_box"}, {"lo", {0.0, 0.0}}, {"hi", {1.0, 2.0}}};
  CHECK(config::parse_reference(b).dim() == 2);
  json bad = {{"kind", "finite"}, {"atoms", {0.0}}, {"weights", {-1.0}}};
  CHECK(field_of([&] { config::parse_reference(bad); }).rfind("reference", 0) == 0);
  json unknown = {{"kind", "discrete"}};
  CHECK(field_of([&] { config::parse_reference(unknown); }) == "reference.kind");
}

TEST_CASE("potential specs") {
  json ref = {{"kind", "finite"}, {"atoms", {-1.0, 0.0, 2.0}}};
  const auto ell = config::parse_reference(ref);
  json p = {{"confinement", {{"sum", {"power:2", {{"name", "constant:1"}, {"scale", 0.5}}}}}},
            {"interaction", "squared_distance"}};
  const auto pair = config::parse_potential(p, &ell);
  const Point x{2.0}, y{-1.0};
  CHECK(pair.confinement(x) == doctest::Approx(4.5));
  CHECK(pair.interaction(x, y) == doctest::Approx(9.0));
  CHECK(p["dim"] == 1);
  CHECK(pair.name.find(" | ") != std::string::npos);

  json masked = {{"interaction", {{"name", "w1"}, {"h", "log"}, {"region", {{"box", {{"lo", {-0.5}}, {"hi", {0.5}}}}}}}}};
  const auto mp = config::parse_potential(masked, &ell);
  const Point a{0.0}, b{0.25}, c{2.0};
  CHECK(mp.interaction(a, b) == doctest::Approx(-std::log(0.25)));
  CHECK(mp.interaction(a, c) == 0.0);

  json bad = {{"interaction", "yukawa"}};
  CHECK(field_of([&] { config::parse_potential(bad, &ell); }).rfind("potential.interaction", 0) == 0);
  json badp = {{"confinement", "power:x"}};
  CHECK(field_of([&] { config::parse_potential(badp, &ell); }).rfind("potential.confinement", 0) == 0);
  json nop = {{"confinement", "power"}};
  CHECK_THROWS_AS(config::parse_potential(nop, &ell), ConfigError);
}

TEST_CASE("normalized potential") {
  json ref = {{"kind", "finite"}, {"atoms", {0.0, 1.0}}, {"weights", {1.0, 1.0}}};
  const auto ell = config::parse_reference(ref);
  json p = {{"normalize", true}, {"confinement", "power:2"}};
  const auto pair = config::parse_potential(p, &ell);
  const double mass = std::exp(-pair.confinement(Point{0.0})) + std::exp(-pair.confinement(Point{1.0}));
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  json q = {{"normalize", true}};
  CHECK_THROWS_AS(config::parse_potential(q, nullptr), ConfigError);
}

TEST_CASE("functional, schedule, grid, sampler sections") {
  json f = {{"kind", "tanh_moment"}, {"g", "coordinate:1"}, {"c", 2.0}, {"offset", 0.5}};
  const auto tf = config::parse_functional(f, 1);
  CHECK(tf(DiscreteMeasure::dirac({1.0})) == doctest::Approx(0.5 + 2.0 * std::tanh(1.0)));
  json s = {{"kind", "n^2"}, {"n_list", {2, 3}}};
  CHECK(config::parse_schedule(s).beta(3) == 9.0);
  json bad_s = {{"kind", "n"}, {"n_list", {3, 2}}};
  CHECK(field_of([&] { config::parse_schedule(bad_s); }).rfind("schedule", 0) == 0);
  json ref = {{"kind", "finite"}, {"atoms", {0.0, 1.0, 2.0}}};
  const auto ell = config::parse_reference(ref);
  json g = json::object();
  CHECK(config::parse_grid(g, ell).size() == 3);
  CHECK(g["kind"] == "reference");
  json gb = {{"kind", "box"}, {"lo", {0.0}}, {"hi", {1.0}}, {"step", 0.25}};
  CHECK(config::parse_grid(gb, ell).size() == 5);
  json sm = {{"n", 4}, {"beta_n", 8.0}, {"proposal", "random_walk"}};
  const auto ss = config::parse_sampler(sm, 1);
  CHECK(ss.config.proposal == SamplerConfig::Proposal::kRandomWalk);
  CHECK(ss.beta_n == 8.0);
  CHECK(sm.contains("burn_in"));
  json bad_prop = {{"n", 4}, {"proposal", "gibbs"}};
  CHECK(field_of([&] { config::parse_sampler(bad_prop, 1); }) == "sampler.proposal");
}

TEST_CASE("every catalog example parses") {
  const fs::path dir = scratch("catalog");
  write_file(dir / "grid1.csv", "d,1\nlo,-2\nhi,2\nstep,1\nvalues\n4,1,0,1,4\n");
  write_file(dir / "grid2.csv", "d,2\nlo,-2,-2\nhi,2,2\nstep,4\nvalues\n0,1,1,0\n");
  auto localize = [&](json e, const std::string& file) {
    if (e.is_string()) {
      auto s = e.get<std::string>();
      const auto c = s.find("grid.csv");
      if (c != std::string::npos) s = s.substr(0, c) + (dir / file).string();
      return json(s);
    }
    return e;
  };
  const json cat = config::catalog();
  json ref = {{"kind", "finite"}, {"atoms", {-1.0, 0.0, 1.0}}};
  const auto ell = config::parse_reference(ref);
  for (const auto& e : cat["confinements"]) {
    json ex = localize(e["example"], "grid1.csv");
    CHECK_NOTHROW(config::parse_confinement(ex, 1, "x"));
  }
  for (const auto& e : cat["interactions"]) {
    const bool pair_table = e["name"].get<std::string>().rfind("tabulated_pair", 0) == 0;
    json ex = localize(e["example"], pair_table ? "grid2.csv" : "grid1.csv");
    CHECK_NOTHROW(config::parse_interaction(ex, 1, "x"));
  }
  for (const auto& e : cat["references"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_reference(ex));
  }
  for (const auto& e : cat["schedules"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_schedule(ex));
  }
  for (const auto& e : cat["metrics"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_concentration(ex));
  }
  for (const auto& e : cat["weight_functions"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_weight_function(ex, "x"));
  }
  for (const auto& e : cat["scalar_fields"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_scalar_field(ex, 1, "x"));
  }
  for (const auto& e : cat["functionals"]) {
    json ex = e["example"];
    CHECK_NOTHROW(config::parse_functional(ex, 1));
  }
  for (const auto& [section, entries] : cat.items()) {
    if (section == "commands") continue;
    for (std::size_t i = 1; i < entries.size(); ++i) CHECK(entries[i - 1]["name"] < entries[i]["name"]);
  }
  CHECK(config::catalog_text().find("interactions:") != std::string::npos);
}

#ifdef GIBBSLAB_CLI
TEST_CASE("cli: minimize on a Sanov instance") {
  const fs::path dir = scratch("minimize");
  write_file(dir / "cfg.json", R"({
    "reference": {"kind": "finite", "atoms": [-1, 0, 2], "weights": [1, 3, 2]},
    "potential": {"confinement": "power:2", "interaction": "zero"},
    "variational": {"rate": "I"}
  })");
  REQUIRE(run_cli("minimize --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string()) == 0);
  const json r = json::parse(slurp(dir / "out" / "result.json"));
  CHECK(std::abs(r["value"].get<double>()) <= 1e-8);
  const json m = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m["tool"]["version"] == kVersion);
  CHECK(m["variational"].contains("tol"));
  CHECK(fs::exists(dir / "out" / "table.csv"));
}

TEST_CASE("cli: laplace on a non-interacting gas") {
  const fs::path dir = scratch("laplace");
  write_file(dir / "cfg.json", R"({
    "reference": {"kind": "finite", "atoms": [-1, 0, 1], "weights": [1, 2, 1.5]},
    "potential": {"confinement": "power:2", "interaction": "zero"},
    "functional": {"kind": "linear", "g": "coordinate:1"},
    "schedule": {"kind": "n", "n_list": [1, 2, 4]}
  })");
  REQUIRE(run_cli("laplace --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string()) == 0);
  const json r = json::parse(slurp(dir / "out" / "result.json"));
  REQUIRE(r["rows"].size() == 3);
  for (const auto& row : r["rows"]) CHECK(row["gap"].get<double>() <= 1e-7);
}

TEST_CASE("cli: config errors name the field and exit 2") {
  const fs::path dir = scratch("error");
  write_file(dir / "cfg.json", R"({
    "reference": {"kind": "finite", "atoms": [0, 1]},
    "potential": {"interaction": "yukawa"},
    "sampler": {"n": 2}
  })");
  CHECK(run_cli("sample --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string()) == 2);
  const json e = json::parse(slurp(dir / "out" / "error.json"));
  CHECK(e["exit_code"] == 2);
  CHECK(e["field"].get<std::string>().rfind("potential.interaction", 0) == 0);
  CHECK(run_cli("sample --config " + (dir / "missing.json").string() + " --out " + (dir / "out2").string()) == 2);
  CHECK(run_cli("sample --config " + (dir / "cfg.json").string() + " --seed -3 --out " + (dir / "out3").string()) ==
        2);
}

TEST_CASE("cli: budget overrun exits 4") {
  const fs::path dir = scratch("budget");
  write_file(dir / "cfg.json", R"({
    "reference": {"kind": "finite", "atoms": [0, 1, 2]},
    "potential": {"confinement": "power:2", "interaction": "squared_distance"},
    "functional": {"kind": "linear", "g": "coordinate:1"},
    "schedule": {"kind": "n", "n_list": [12]}
  })");
  CHECK(run_cli("laplace --config " + (dir / "cfg.json").string() + " --budget 1000 --out " + (dir / "out").string()) ==
        4);
  CHECK(json::parse(slurp(dir / "out" / "error.json"))["error"] == "budget");
}

TEST_CASE("cli: manifest re-run reproduces the result byte for byte") {
  const fs::path dir = scratch("rerun");
  write_file(dir / "cfg.json", R"({
    "reference": {"kind": "lebesgue", "dim": 1},
    "potential": {"confinement": "power:2", "interaction": "log"},
    "sampler": {"n": 4, "burn_in": 50, "samples": 10, "chains": 2}
  })");
  REQUIRE(run_cli("sample --config " + (dir / "cfg.json").string() + " --seed 17 --threads 2 --out " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("sample --config " + (dir / "a" / "manifest.json").string() + " --threads 1 --out " +
                  (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "result.json") == slurp(dir / "b" / "result.json"));
  CHECK(slurp(dir / "a" / "samples.jsonl") == slurp(dir / "b" / "samples.jsonl"));
  CHECK(json::parse(slurp(dir / "b" / "manifest.json"))["seed"] == 17);
}

TEST_CASE("cli: catalog") {
  CHECK(run_cli("catalog --json") == 0);
  CHECK(run_cli("--version") == 0);
}
#endif
