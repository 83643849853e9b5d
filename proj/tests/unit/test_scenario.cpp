#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/parallel.hpp"
#include "phasespace/scenario.hpp"

using namespace phasespace;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "phasespace_scenario_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// First number after "key": in a JSON text.
double metric(const std::string& json, const std::string& key) {
  const auto at = json.find("\"" + key + "\":");
  REQUIRE(at != std::string::npos);
  return std::stod(json.substr(at + key.size() + 3));
}

constexpr const char* kSmall = R"({
  "name": "small",
  "grid": {"n": 64, "x_min": -10, "x_max": 10},
  "state": {"type": "gaussian", "x0": 1, "sigma": 0.8},
  "potential": {"type": "double_well", "a": -1, "b": 0.1},
  "experiment": {"type": "evolve", "route": "characteristic", "dt": 0.01, "t_final": 0.5,
                 "sample_times": [0, 0.25, 0.5]},
  "output": {"directory": "small", "formats": ["json", "csv", "wig1"]}
})";

}  // namespace

TEST_CASE("built-in table") {
  const auto table = list_scenarios();
  CHECK(table.size() >= 7);
  std::set<std::string> names;
  for (const auto& s : table) {
    names.insert(s.name);
    CHECK_FALSE(s.description.empty());
    CHECK(builtin_scenario(s.name).has_value());
  }
  CHECK(names.size() == table.size());
  for (const char* required : {"ho-roundtrip", "free-spread", "quartic-crossval", "cat-negativity", "two-slit",
                               "tomo-roundtrip", "ehrenfest-quartic"}) {
    CHECK(names.count(required) == 1);
  }
  CHECK_FALSE(builtin_scenario("no-such-thing").has_value());
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 64}, "state": {"type": "gaussian"}, "experiment": {"type": "wigner"},
                                   "colour": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 64, "dx": 1}, "state": {"type": "gaussian"},
                                   "experiment": {"type": "wigner"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 64}, "state": {"type": "squeezed"}, "experiment": {"type": "wigner"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": "64"}, "state": {"type": "gaussian"}, "experiment": {"type": "wigner"}})"),
                  ConfigError);
  try {
    parse_config(R"({"grid": {"n": 7}, "state": {"type": "gaussian"}, "experiment": {"type": "wigner"}})");
    FAIL("n = 7 accepted");
  } catch (const PreconditionError& e) {
    CHECK(e.module() == "grid");
    CHECK(e.parameter() == "n");
  }
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 64, "x_min": -10, "x_max": 10},
                                   "state": {"type": "gaussian", "x0": 9.5}, "experiment": {"type": "wigner"}})"),
                  PreconditionError);
}

TEST_CASE("canonical form parses back to itself") {
  const auto c = parse_config(kSmall);
  const std::string canonical = config_to_json(c);
  CHECK(config_to_json(parse_config(canonical)) == canonical);
  for (const auto& s : list_scenarios()) {
    const auto b = *builtin_scenario(s.name);
    CHECK(config_to_json(parse_config(config_to_json(b))) == config_to_json(b));
  }
}

TEST_CASE("superposition configs") {
  const auto c = parse_config(R"({
    "grid": {"n": 128, "x_min": -12, "x_max": 12},
    "state": {"type": "superposition", "terms": [
      {"state": {"type": "harmonic", "level": 0}, "re": 1},
      {"state": {"type": "harmonic", "level": 1}, "im": 1}]},
    "experiment": {"type": "moments"}})");
  const auto psi = build_state(build_grid(c.grid), c.state);
  CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("runs are byte-identical across repeats and worker counts") {
  const auto config = parse_config(kSmall);
  const auto root_a = scratch("a");
  const auto root_b = scratch("b");
  set_worker_count(1);
  const auto a = run_scenario(config, root_a);
  set_worker_count(3);
  const auto b = run_scenario(config, root_b);
  set_worker_count(0);
  REQUIRE(a.artifacts == b.artifacts);
  CHECK(a.artifacts.back() == "manifest.json");
  for (const auto& name : a.artifacts) {
    if (name == "runtime.json") continue;
    CAPTURE(name);
    CHECK(read(a.directory / name) == read(b.directory / name));
  }
  const std::string manifest = read(a.directory / "manifest.json");
  for (const char* key : {"\"boundary\"", "\"norm_drift\"", "\"runtime\"", "\"version\"", "\"config\"", "\"metrics\""}) {
    CHECK(manifest.find(key) != std::string::npos);
  }
}

TEST_CASE("output root override") {
  const auto root = scratch("env");
  ::setenv("PHASESPACE_OUTPUT_ROOT", root.c_str(), 1);
  CHECK(default_output_root() == root);
  ::unsetenv("PHASESPACE_OUTPUT_ROOT");
  CHECK(default_output_root() == fs::current_path());
}

TEST_CASE("cat-negativity and ho-roundtrip report their headline metrics") {
  const auto root = scratch("builtins");
  const auto cat = run_scenario(*builtin_scenario("cat-negativity"), root);
  CHECK(metric(cat.manifest, "min_w") < -0.05);
  const auto ho = run_scenario(*builtin_scenario("ho-roundtrip"), root);
  CHECK(metric(ho.manifest, "max_discrepancy") < 1e-6);
}
