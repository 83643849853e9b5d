#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "phasespace/errors.hpp"
#include "phasespace/scenario.hpp"
#include "phasespace/tomography.hpp"

namespace phasespace {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Typed view of one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + ": must be finite");
    return d;
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      throw ConfigError(where(key) + ": expected a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_string()) throw ConfigError(where(key) + ": expected a string");
    return v->get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = find(key, true);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::string> texts(const std::string& key, std::vector<std::string> fallback) {
    const json* v = find(key, true);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list of strings");
    std::vector<std::string> out;
    for (const auto& e : *v) {
      if (!e.is_string()) throw ConfigError(where(key) + ": expected a list of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  const json& raw(const std::string& key) {
    const json* v = find(key, false);
    return *v;
  }

  Section child(const std::string& key) { return Section(raw(key), where(key)); }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json* find(const std::string& key, bool optional) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) {
      if (optional) return nullptr;
      throw ConfigError(where(key) + ": missing");
    }
    return &*it;
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

GridSpec parse_grid(Section s) {
  GridSpec g;
  g.n = s.count("n", g.n);
  g.hbar = s.number("hbar", g.hbar);
  g.mass = s.number("mass", g.mass);
  g.square = s.flag("square", false);
  if (!g.square) {
    g.x_min = s.number("x_min", g.x_min);
    g.x_max = s.number("x_max", g.x_max);
  }
  s.finish();
  return g;
}

StateSpec parse_state(Section s) {
  StateSpec st;
  st.type = s.text("type");
  auto param = [&](const char* key, double fallback) { st.params[key] = s.number(key, fallback); };
  if (st.type == "gaussian") {
    param("x0", 0.0);
    param("p0", 0.0);
    param("sigma", std::sqrt(0.5));
  } else if (st.type == "harmonic") {
    const std::size_t level = s.count("level", 0);
    st.params["level"] = static_cast<double>(level);
    param("omega", 1.0);
  } else if (st.type == "cat") {
    param("offset", 3.0);
    param("sigma", std::sqrt(0.5));
  } else if (st.type == "two_slit") {
    param("separation", 4.0);
    param("width", 0.5);
  } else if (st.type == "superposition") {
    const json& terms = s.raw("terms");
    if (!terms.is_array() || terms.empty()) throw ConfigError(s.path() + ".terms: expected a non-empty list");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Section t(terms[i], s.path() + ".terms[" + std::to_string(i) + "]");
      StateTerm term{parse_state(t.child("state")), cplx(t.number("re", 1.0), t.number("im", 0.0))};
      if (term.state.type == "superposition") throw ConfigError(t.path() + ".state: nested superpositions are not supported");
      st.terms.push_back(std::move(term));
      t.finish();
    }
  } else {
    throw ConfigError(s.path() + ".type: unknown state '" + st.type + "'");
  }
  s.finish();
  return st;
}

PotentialSpec parse_potential(Section s) {
  PotentialSpec v;
  v.type = s.text("type");
  if (v.type == "harmonic") {
    v.params["omega"] = s.number("omega", 1.0);
  } else if (v.type == "quartic") {
    v.params["lambda"] = s.number("lambda", 0.1);
  } else if (v.type == "double_well") {
    v.params["a"] = s.number("a", -1.0);
    v.params["b"] = s.number("b", 0.1);
  } else if (v.type == "polynomial") {
    v.coefficients = s.numbers("coefficients");
  } else if (v.type != "free") {
    throw ConfigError(s.path() + ".type: unknown potential '" + v.type + "'");
  }
  s.finish();
  return v;
}

ExperimentSpec parse_experiment(Section s) {
  ExperimentSpec e;
  e.type = s.text("type");
  if (e.type == "wigner") {
  } else if (e.type == "evolve" || e.type == "validate") {
    if (e.type == "evolve") {
      e.route = s.text("route", e.route);
      if (e.route != "schrodinger" && e.route != "moyal_exact" && e.route != "moyal_truncated" &&
          e.route != "characteristic") {
        throw ConfigError(s.path() + ".route: unknown route '" + e.route + "'");
      }
      e.n_max = static_cast<unsigned>(s.count("n_max", e.n_max));
    }
    e.dt = s.number("dt", e.dt);
    e.t_final = s.number("t_final");
    e.sample_times = s.numbers("sample_times", std::vector<double>{0.0, e.t_final});
  } else if (e.type == "tomo") {
    if (s.has("angles") && s.raw("angles").is_array()) {
      e.angles = s.numbers("angles");
    } else {
      e.angles = equispaced_angles(s.count("angles", 180));
    }
  } else if (e.type == "moments") {
    e.dt = s.number("dt", e.dt);
    e.sample_times = s.numbers("sample_times", std::vector<double>{0.0});
  } else if (e.type == "ehrenfest") {
    e.dt = s.number("dt", e.dt);
    e.sample_times = s.numbers("sample_times");
  } else {
    throw ConfigError(s.path() + ".type: unknown experiment '" + e.type + "'");
  }
  s.finish();
  if (!(e.dt > 0.0)) throw PreconditionError("dynamics", "dt", "must be positive");
  if (e.t_final < 0.0) throw PreconditionError("dynamics", "t_final", "must be non-negative");
  if (e.type == "ehrenfest" && e.sample_times.empty()) {
    throw PreconditionError("observables", "sample_times", "empty time grid");
  }
  return e;
}

OutputSpec parse_output(Section s) {
  OutputSpec o;
  o.directory = s.text("directory", "");
  o.formats = s.texts("formats", o.formats);
  for (const auto& f : o.formats) {
    if (f != "json" && f != "csv" && f != "wig1") throw ConfigError(s.path() + ".formats: unknown format '" + f + "'");
  }
  s.finish();
  return o;
}

ordered_json encode_state(const StateSpec& st) {
  ordered_json out;
  out["type"] = st.type;
  for (const auto& [key, value] : st.params) out[key] = value;
  if (st.type == "superposition") {
    ordered_json terms = ordered_json::array();
    for (const auto& t : st.terms) {
      terms.push_back({{"state", encode_state(t.state)}, {"re", t.coefficient.real()}, {"im", t.coefficient.imag()}});
    }
    out["terms"] = std::move(terms);
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Section root(doc, "");
  ScenarioConfig c;
  c.name = root.text("name", c.name);
  c.grid = parse_grid(root.child("grid"));
  c.state = parse_state(root.child("state"));
  if (root.has("potential")) c.potential = parse_potential(root.child("potential"));
  c.experiment = parse_experiment(root.child("experiment"));
  if (root.has("output")) c.output = parse_output(root.child("output"));
  root.finish();

  const PhaseGrid grid = build_grid(c.grid);
  (void)build_state(grid, c.state);
  (void)build_potential(c.potential);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  ordered_json out;
  out["name"] = c.name;
  ordered_json grid = {{"n", c.grid.n}, {"hbar", c.grid.hbar}, {"mass", c.grid.mass}, {"square", c.grid.square}};
  if (!c.grid.square) {
    grid["x_min"] = c.grid.x_min;
    grid["x_max"] = c.grid.x_max;
  }
  out["grid"] = std::move(grid);
  out["state"] = encode_state(c.state);
  ordered_json potential = {{"type", c.potential.type}};
  for (const auto& [key, value] : c.potential.params) potential[key] = value;
  if (c.potential.type == "polynomial") potential["coefficients"] = c.potential.coefficients;
  out["potential"] = std::move(potential);

  const ExperimentSpec& e = c.experiment;
  ordered_json experiment = {{"type", e.type}};
  if (e.type == "evolve") {
    experiment["route"] = e.route;
    if (e.route == "moyal_truncated") experiment["n_max"] = e.n_max;
  }
  if (e.type == "evolve" || e.type == "validate") experiment["t_final"] = e.t_final;
  if (e.type != "wigner" && e.type != "tomo") {
    experiment["dt"] = e.dt;
    experiment["sample_times"] = e.sample_times;
  }
  if (e.type == "tomo") experiment["angles"] = e.angles;
  out["experiment"] = std::move(experiment);
  out["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return out.dump(2);
}

PhaseGrid build_grid(const GridSpec& spec) {
  if (spec.square) return make_square_grid(spec.n, spec.hbar, spec.mass);
  return make_grid(spec.n, spec.x_min, spec.x_max, spec.hbar, spec.mass);
}

Wavefunction build_state(const PhaseGrid& grid, const StateSpec& spec) {
  const auto& p = spec.params;
  if (spec.type == "gaussian") return gaussian_packet(grid, p.at("x0"), p.at("p0"), p.at("sigma"));
  if (spec.type == "harmonic") return harmonic_eigenstate(grid, static_cast<unsigned>(p.at("level")), p.at("omega"));
  if (spec.type == "cat") return cat_state(grid, p.at("offset"), p.at("sigma"));
  if (spec.type == "two_slit") return two_slit_state(grid, p.at("separation"), p.at("width"));
  if (spec.type == "superposition") {
    std::vector<Wavefunction> states;
    std::vector<cplx> coefficients;
    for (const auto& t : spec.terms) {
      states.push_back(build_state(grid, t.state));
      coefficients.push_back(t.coefficient);
    }
    return superpose(states, coefficients).state;
  }
  throw ConfigError("unknown state '" + spec.type + "'");
}

Potential build_potential(const PotentialSpec& spec) {
  const auto& p = spec.params;
  if (spec.type == "harmonic") return Potential::harmonic(p.at("omega"));
  if (spec.type == "quartic") return Potential::quartic(p.at("lambda"));
  if (spec.type == "double_well") return Potential::double_well(p.at("a"), p.at("b"));
  if (spec.type == "polynomial") return Potential::polynomial(spec.coefficients);
  if (spec.type == "free") return Potential::free();
  throw ConfigError("unknown potential '" + spec.type + "'");
}

}  // namespace phasespace
