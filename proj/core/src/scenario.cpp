#include "phasespace/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>

#include "json_codec.hpp"
#include "phasespace/dynamics.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/io.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/parallel.hpp"
#include "phasespace/tomography.hpp"
#include "phasespace/wigner.hpp"

#ifndef PHASESPACE_VERSION
#define PHASESPACE_VERSION "0.0.0"
#endif

namespace phasespace {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class Artifacts {
 public:
  Artifacts(fs::path dir, const std::vector<std::string>& formats) : dir_(std::move(dir)), formats_(formats) {}

  bool wants(const std::string& format) const {
    return std::find(formats_.begin(), formats_.end(), format) != formats_.end();
  }

  void csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (!wants("csv")) return;
    std::ofstream out(open(name), std::ios::binary | std::ios::trunc);
    body(out);
    check(out, name);
  }

  void json(const std::string& name, const ordered_json& value) {
    if (!wants("json")) return;
    std::ofstream out(open(name), std::ios::binary | std::ios::trunc);
    out << value.dump(2) << '\n';
    check(out, name);
  }

  template <typename Field>
  void field(const std::string& name, const Field& value) {
    if (!wants("wig1")) return;
    io::save(open(name), value);
  }

  void text(const std::string& name, const std::string& content, bool listed = true) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out << content;
    check(out, name);
    if (listed) names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path open(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }
  void check(const std::ostream& out, const std::string& name) const {
    if (!out) throw fs::filesystem_error("cannot write artifact", dir_ / name, std::make_error_code(std::errc::io_error));
  }

  fs::path dir_;
  std::vector<std::string> formats_;
  std::vector<std::string> names_;
};

struct Outcome {
  ordered_json metrics = ordered_json::object();
  double boundary = 0.0;
  double norm_drift = 0.0;
  std::size_t time_steps = 0;
};

std::size_t steps_for(double t, double dt) {
  const double ratio = t / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw PreconditionError("cli", "sample_times", "time " + io::format_number(t) + " is not a multiple of dt");
  }
  return static_cast<std::size_t>(steps);
}

std::vector<std::size_t> sample_steps(const ExperimentSpec& e, std::optional<double> t_final) {
  std::vector<std::size_t> out;
  for (double t : e.sample_times) {
    if (t < 0.0 || (t_final && t > *t_final)) {
      throw PreconditionError("cli", "sample_times", "time " + io::format_number(t) + " outside [0, t_final]");
    }
    out.push_back(steps_for(t, e.dt));
    if (out.size() > 1 && out.back() < out[out.size() - 2]) {
      throw PreconditionError("cli", "sample_times", "times must be nondecreasing");
    }
  }
  return out;
}

void check_boundary(double mass) {
  if (mass > kBoundaryHardFail) {
    throw NumericalError(NumericalError::Monitor::boundary,
                         "boundary density " + io::format_number(mass) + " exceeds hard limit");
  }
}

ordered_json moments_json(const MomentReport& m) { return detail::encode(m); }

Outcome run_wigner(const Wavefunction& psi, const Potential& v, Artifacts& out) {
  const auto transform = wigner_transform_checked(psi);
  const WignerFunction& w = transform.wigner;
  const auto neg = negativity(w);
  Outcome o;
  o.boundary = boundary_mass(w);
  o.norm_drift = std::abs(psi.norm_squared() - 1.0);
  o.metrics = {{"integral", w.integral()},
               {"purity", purity(w)},
               {"min_w", neg.min_value},
               {"negative_volume", neg.negative_volume},
               {"imaginary_residue", transform.imaginary_residue},
               {"energy", phase_space_energy(w, v)},
               {"moments", moments_json(moments(w))}};
  out.field("state.wig1", psi);
  out.csv("state.csv", [&](std::ostream& s) { io::write_csv(s, psi); });
  out.field("wigner.wig1", w);
  out.csv("wigner.csv", [&](std::ostream& s) { io::write_csv(s, w); });
  return o;
}

struct EvolveSample {
  double t;
  double norm_drift;
  double boundary;
  double energy;
  MomentReport moments;
};

Outcome run_evolve(const Wavefunction& psi0, const Potential& v, const ExperimentSpec& e, Artifacts& out) {
  const auto steps = sample_steps(e, e.t_final);
  const double dt = e.dt;
  std::vector<EvolveSample> samples;
  std::size_t done = 0;
  std::optional<WignerFunction> final_w;

  if (e.route == "schrodinger") {
    Wavefunction psi = psi0;
    for (std::size_t s : steps) {
      psi = propagate_schrodinger(psi, v, dt, s - done);
      done = s;
      const double b = boundary_mass(psi);
      check_boundary(b);
      samples.push_back({psi.time(), std::abs(psi.norm_squared() - 1.0), b,
                         expectation_operator(psi, Observable::energy, v), moments(psi)});
    }
    final_w = wigner_transform(psi);
  } else if (e.route == "characteristic") {
    CharacteristicZ z = to_characteristic(wigner_transform(psi0));
    for (std::size_t s : steps) {
      z = propagate_characteristic(z, v, dt, s - done);
      done = s;
      const double b = boundary_mass(z);
      check_boundary(b);
      const auto f = factorize_characteristic(z);
      samples.push_back({z.time(), std::abs(z.trace() - 1.0), b, expectation_operator(f.state, Observable::energy, v),
                         moments(f.state)});
      final_w = wigner_transform(f.state);
      final_w->set_time(z.time());
    }
  } else {
    WignerFunction w = wigner_transform(psi0);
    for (std::size_t s : steps) {
      w = e.route == "moyal_exact" ? propagate_moyal_exact(w, v, dt, s - done)
                                   : propagate_moyal_truncated(w, v, dt, s - done, e.n_max);
      done = s;
      const double b = boundary_mass(w);
      check_boundary(b);
      samples.push_back({w.time(), std::abs(w.integral() - 1.0), b, phase_space_energy(w, v), moments(w)});
    }
    final_w = w;
  }

  Outcome o;
  o.time_steps = done;
  ordered_json rows = ordered_json::array();
  for (const auto& s : samples) {
    o.boundary = std::max(o.boundary, s.boundary);
    o.norm_drift = std::max(o.norm_drift, s.norm_drift);
    rows.push_back({{"t", s.t},
                    {"norm_drift", s.norm_drift},
                    {"boundary", s.boundary},
                    {"energy", s.energy},
                    {"moments", moments_json(s.moments)}});
  }
  double energy_drift = 0.0;
  for (const auto& s : samples) {
    const double e0 = samples.front().energy;
    energy_drift = std::max(energy_drift, std::abs(s.energy - e0) / std::max(std::abs(e0), 1e-12));
  }
  o.metrics["route"] = e.route;
  o.metrics["max_energy_drift"] = energy_drift;
  if (final_w) {
    const auto neg = negativity(*final_w);
    o.metrics["final_min_w"] = neg.min_value;
    o.metrics["final_negative_volume"] = neg.negative_volume;
    out.field("final_wigner.wig1", *final_w);
  }
  if (!samples.empty()) {
    o.metrics["final_moments"] = moments_json(samples.back().moments);
  }
  // Free Gaussian spreading has a closed form.
  if (v.degree(psi0.grid().mass()) == 0 && !samples.empty()) {
    const MomentReport m0 = moments(psi0);
    const double mass = psi0.grid().mass();
    double gap = 0.0;
    for (const auto& s : samples) {
      const double expected = m0.var_x + 2.0 * m0.cov_xp * s.t / mass + m0.var_p * s.t * s.t / (mass * mass);
      gap = std::max(gap, std::abs(s.moments.var_x - expected));
    }
    o.metrics["max_free_spread_error"] = gap;
  }
  out.json("evolution.json", rows);
  out.csv("evolution.csv", [&](std::ostream& str) {
    str << "t,norm_drift,boundary,energy,mean_x,mean_p,var_x,var_p,cov_xp,uncertainty_product\n";
    for (const auto& s : samples) {
      const auto& m = s.moments;
      for (double x : {s.t, s.norm_drift, s.boundary, s.energy, m.mean_x, m.mean_p, m.var_x, m.var_p, m.cov_xp}) {
        str << io::format_number(x) << ',';
      }
      str << io::format_number(m.uncertainty_product) << '\n';
    }
  });
  return o;
}

Outcome run_validate(const Wavefunction& psi0, const Potential& v, const ExperimentSpec& e, Artifacts& out) {
  std::optional<WignerFunction> last;
  const auto report =
      cross_validate(psi0, v, e.t_final, e.dt, e.sample_times,
                     [&](std::size_t, const WignerFunction& a, const WignerFunction&, const WignerFunction&) { last = a; });
  const WignerFunction w0 = wigner_transform(psi0);
  const Wavefunction back = reconstruct_wavefunction(w0);

  Outcome o;
  o.time_steps = steps_for(e.t_final, e.dt);
  o.boundary = report.max_boundary();
  o.norm_drift = report.max_norm_drift();
  double ab = 0.0, ac = 0.0, bc = 0.0;
  for (const auto& r : report.rows) {
    ab = std::max(ab, r.ab);
    ac = std::max(ac, r.ac);
    bc = std::max(bc, r.bc);
  }
  o.metrics = {{"max_discrepancy", report.max_discrepancy()},
               {"max_ab", ab},
               {"max_ac", ac},
               {"max_bc", bc},
               {"max_energy_drift", report.max_energy_drift()},
               {"max_factorization_residual", report.max_factorization_residual()},
               {"roundtrip_fidelity", fidelity(psi0, back)}};
  out.json("evolution_report.json", detail::encode(report));
  out.csv("evolution_report.csv", [&](std::ostream& s) { io::write_csv(s, report); });
  if (last) out.field("final_wigner.wig1", *last);
  return o;
}

Outcome run_tomo(const Wavefunction& psi, const ExperimentSpec& e, Artifacts& out) {
  const PhaseGrid& grid = psi.grid();
  const WignerFunction w = wigner_transform(psi);
  const Tomogram tomo = forward_tomogram(w, e.angles);
  const WignerFunction rec = inverse_tomogram(tomo, grid);

  double norm = 0.0;
  for (double x : w.values()) norm += x * x;
  norm = std::sqrt(norm * grid.dx() * grid.dp());

  const MomentReport m = moments(w);
  const auto mx = marginal_position(w);
  const auto mp = marginal_momentum(w);
  double mean_gap = 0.0, marginal_x_gap = 0.0, marginal_p_gap = 0.0;
  for (std::size_t f = 0; f < tomo.frames(); ++f) {
    const auto frame = tomo.frame(f);
    double mean = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) mean += tomo.X[i] * frame[i] * tomo.dX;
    mean_gap = std::max(mean_gap, std::abs(mean - (tomo.mu(f) * m.mean_x + tomo.nu(f) * m.mean_p)));
    if (tomo.angles[f] == 0.0) {
      for (std::size_t i = 0; i < frame.size(); ++i) marginal_x_gap = std::max(marginal_x_gap, std::abs(frame[i] - mx[i]));
    }
    if (tomo.angles[f] == 0.5 * std::numbers::pi) {
      for (std::size_t i = 0; i < frame.size(); ++i) marginal_p_gap = std::max(marginal_p_gap, std::abs(frame[i] - mp[i]));
    }
  }

  Outcome o;
  o.boundary = boundary_mass(w);
  o.norm_drift = std::abs(psi.norm_squared() - 1.0);
  o.metrics = {{"frames", tomo.frames()},
               {"reconstruction_l2_error", l2_distance(rec, w) / norm},
               {"quadrature_mean_gap", mean_gap},
               {"marginal_x_gap", marginal_x_gap},
               {"marginal_p_gap", marginal_p_gap},
               {"min_raw", tomo.min_raw}};
  out.field("wigner.wig1", w);
  out.field("tomogram.wig1", tomo);
  out.csv("tomogram.csv", [&](std::ostream& s) { io::write_csv(s, tomo); });
  out.field("reconstruction.wig1", rec);
  return o;
}

Outcome run_moments(const Wavefunction& psi0, const Potential& v, const ExperimentSpec& e, Artifacts& out) {
  const auto steps = sample_steps(e, std::nullopt);
  Wavefunction psi = psi0;
  std::size_t done = 0;
  std::vector<MomentReport> op, ps;
  double route_gap = 0.0, min_product = INFINITY, boundary = 0.0;
  for (std::size_t s : steps) {
    psi = propagate_schrodinger(psi, v, e.dt, s - done);
    done = s;
    boundary = std::max(boundary, boundary_mass(psi));
    check_boundary(boundary);
    op.push_back(moments(psi));
    ps.push_back(moments(wigner_transform(psi)));
    const auto& a = op.back();
    const auto& b = ps.back();
    for (double gap : {a.mean_x - b.mean_x, a.mean_p - b.mean_p, a.var_x - b.var_x, a.var_p - b.var_p,
                       a.cov_xp - b.cov_xp}) {
      route_gap = std::max(route_gap, std::abs(gap));
    }
    min_product = std::min(min_product, a.uncertainty_product);
  }
  Outcome o;
  o.time_steps = done;
  o.boundary = boundary;
  o.norm_drift = std::abs(psi.norm_squared() - 1.0);
  o.metrics = {{"max_route_gap", route_gap},
               {"min_uncertainty_product", min_product},
               {"uncertainty_floor", 0.5 * psi0.grid().hbar()}};
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < op.size(); ++i) {
    table.push_back({{"t", e.sample_times[i]}, {"operator", moments_json(op[i])}, {"phase_space", moments_json(ps[i])}});
  }
  out.json("moments.json", table);
  out.csv("moments.csv", [&](std::ostream& s) { io::write_csv(s, e.sample_times, op); });
  return o;
}

Outcome run_ehrenfest(const Wavefunction& psi0, const Potential& v, const ExperimentSpec& e, Artifacts& out) {
  const auto steps = sample_steps(e, std::nullopt);
  const auto rows = ehrenfest_track(psi0, v, e.sample_times, e.dt);
  const Wavefunction last = propagate_schrodinger(psi0, v, e.dt, *std::max_element(steps.begin(), steps.end()));

  double classical_gap = 0.0, force_gap = 0.0, residual = 0.0;
  for (const auto& r : rows) {
    classical_gap = std::max({classical_gap, std::abs(r.mean_x - r.classical_x), std::abs(r.mean_p - r.classical_p)});
    force_gap = std::max(force_gap, std::abs(r.mean_force - r.force_at_mean));
    if (r.has_residuals) residual = std::max({residual, r.position_residual, r.momentum_residual});
  }
  Outcome o;
  o.time_steps = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());
  o.boundary = boundary_mass(last);
  check_boundary(o.boundary);
  o.norm_drift = std::abs(last.norm_squared() - 1.0);
  o.metrics = {{"max_classical_gap", classical_gap}, {"max_force_gap", force_gap}, {"max_ehrenfest_residual", residual}};
  out.json("ehrenfest.json", detail::encode(std::span<const EhrenfestRow>(rows)));
  out.csv("ehrenfest.csv", [&](std::ostream& s) { io::write_csv(s, std::span<const EhrenfestRow>(rows)); });
  return o;
}

struct Builtin {
  const char* name;
  const char* description;
  const char* config;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {"ho-roundtrip", "coherent packet in a harmonic well, three-route cross-validation and psi->W->psi",
       R"({"name": "ho-roundtrip",
           "grid": {"n": 128, "x_min": -12, "x_max": 12},
           "state": {"type": "gaussian", "x0": 2, "p0": 0, "sigma": 0.70710678118654757},
           "potential": {"type": "harmonic", "omega": 1},
           "experiment": {"type": "validate", "dt": 0.001, "t_final": 1,
                          "sample_times": [0, 0.25, 0.5, 0.75, 1]}})"},
      {"free-spread", "free Gaussian spreading against the closed-form width",
       R"({"name": "free-spread",
           "grid": {"n": 256, "x_min": -20, "x_max": 20},
           "state": {"type": "gaussian", "x0": 0, "p0": 0, "sigma": 0.5},
           "potential": {"type": "free"},
           "experiment": {"type": "evolve", "route": "schrodinger", "dt": 0.001, "t_final": 2,
                          "sample_times": [0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2]}})"},
      {"quartic-crossval", "three-route cross-validation in a quartic well",
       R"({"name": "quartic-crossval",
           "grid": {"n": 256, "x_min": -16, "x_max": 16},
           "state": {"type": "gaussian", "x0": 1, "p0": 0, "sigma": 0.70710678118654757},
           "potential": {"type": "quartic", "lambda": 0.1},
           "experiment": {"type": "validate", "dt": 0.001, "t_final": 1,
                          "sample_times": [0, 0.25, 0.5, 0.75, 1]}})"},
      {"cat-negativity", "Wigner function of a two-packet cat state and its negative region",
       R"({"name": "cat-negativity",
           "grid": {"n": 256, "x_min": -16, "x_max": 16},
           "state": {"type": "cat", "offset": 3, "sigma": 0.70710678118654757},
           "experiment": {"type": "wigner"}})"},
      {"two-slit", "two-slit state spreading freely under the exact Moyal flow",
       R"({"name": "two-slit",
           "grid": {"n": 256, "x_min": -20, "x_max": 20},
           "state": {"type": "two_slit", "separation": 4, "width": 0.5},
           "potential": {"type": "free"},
           "experiment": {"type": "evolve", "route": "moyal_exact", "dt": 0.001, "t_final": 1,
                          "sample_times": [0, 0.5, 1]}})"},
      {"tomo-roundtrip", "180-angle quadrature tomogram and filtered back-projection",
       R"({"name": "tomo-roundtrip",
           "grid": {"n": 128, "square": true},
           "state": {"type": "gaussian", "x0": 2, "p0": 1, "sigma": 0.70710678118654757},
           "experiment": {"type": "tomo", "angles": 180}})"},
      {"ehrenfest-quartic", "broad packet in a quartic well next to its classical trajectory",
       R"({"name": "ehrenfest-quartic",
           "grid": {"n": 256, "x_min": -16, "x_max": 16},
           "state": {"type": "gaussian", "x0": 2, "p0": 0, "sigma": 1.5},
           "potential": {"type": "quartic", "lambda": 0.01},
           "experiment": {"type": "ehrenfest", "dt": 0.001,
                          "sample_times": [0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2, 2.25, 2.5, 2.75, 3]}})"},
  };
  return table;
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& b : builtins()) out.push_back({b.name, b.description});
  return out;
}

std::optional<ScenarioConfig> builtin_scenario(std::string_view name) {
  for (const auto& b : builtins()) {
    if (name == b.name) return parse_config(b.config);
  }
  return std::nullopt;
}

std::filesystem::path default_output_root() {
  if (const char* root = std::getenv("PHASESPACE_OUTPUT_ROOT"); root && *root) return root;
  return fs::current_path();
}

std::string_view toolkit_version() noexcept { return PHASESPACE_VERSION; }

RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& output_root) {
  const auto started = std::chrono::steady_clock::now();
  const PhaseGrid grid = build_grid(config.grid);
  const Wavefunction psi0 = build_state(grid, config.state);
  const Potential v = build_potential(config.potential);

  fs::path dir = config.output.directory.empty() ? fs::path("runs") / config.name : fs::path(config.output.directory);
  if (dir.is_relative()) dir = output_root / dir;
  fs::create_directories(dir);
  Artifacts out(dir, config.output.formats);

  const ExperimentSpec& e = config.experiment;
  Outcome o;
  if (e.type == "wigner") {
    o = run_wigner(psi0, v, out);
  } else if (e.type == "evolve") {
    o = run_evolve(psi0, v, e, out);
  } else if (e.type == "validate") {
    o = run_validate(psi0, v, e, out);
  } else if (e.type == "tomo") {
    o = run_tomo(psi0, e, out);
  } else if (e.type == "moments") {
    o = run_moments(psi0, v, e, out);
  } else if (e.type == "ehrenfest") {
    o = run_ehrenfest(psi0, v, e, out);
  } else {
    throw ConfigError("unknown experiment '" + e.type + "'");
  }

  ordered_json manifest;
  manifest["toolkit"] = "phasespace";
  manifest["version"] = std::string(toolkit_version());
  manifest["scenario"] = config.name;
  manifest["config"] = ordered_json::parse(config_to_json(config));
  manifest["metrics"] = std::move(o.metrics);
  manifest["monitors"] = {{"boundary", o.boundary},
                          {"boundary_flagged", o.boundary > kBoundaryFlag},
                          {"norm_drift", o.norm_drift}};
  manifest["runtime"] = {{"time_steps", o.time_steps}, {"wall_clock", "runtime.json"}};
  manifest["artifacts"] = out.names();

  RunResult result;
  result.directory = dir;
  result.manifest = manifest.dump(2) + "\n";
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.text("runtime.json", ordered_json{{"wall_seconds", result.runtime_seconds}, {"workers", worker_count()}}.dump(2) + "\n");
  out.text("manifest.json", result.manifest);
  result.artifacts = out.names();
  return result;
}

}  // namespace phasespace
