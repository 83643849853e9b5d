#include "phasespace/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "json_codec.hpp"

namespace phasespace::io {
namespace {

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw FormatError("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::binary) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

Field load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

// The header stores dx, not x_max; pick the x_max that reproduces dx exactly.
PhaseGrid grid_from(const FieldHeader& h, std::size_t n) {
  double x_max = h.x_min + static_cast<double>(n) * h.dx;
  for (int attempt = 0; attempt < 64; ++attempt) {
    PhaseGrid grid(n, h.x_min, x_max, h.hbar, h.mass);
    if (grid.dx() == h.dx) return grid;
    x_max = std::nextafter(x_max, grid.dx() < h.dx ? INFINITY : -INFINITY);
  }
  return PhaseGrid(n, h.x_min, h.x_min + static_cast<double>(n) * h.dx, h.hbar, h.mass);
}

FieldHeader header_for(const PhaseGrid& grid, std::vector<std::uint64_t> dims, std::uint32_t flags, double t) {
  FieldHeader h;
  h.flags = flags;
  h.dims = std::move(dims);
  h.dx = grid.dx();
  h.dp = grid.dp();
  h.x_min = grid.x_min();
  h.hbar = grid.hbar();
  h.mass = grid.mass();
  h.time = t;
  return h;
}

std::vector<double> interleave(std::span<const cplx> values) {
  std::vector<double> out;
  out.reserve(2 * values.size());
  for (const cplx& v : values) {
    out.push_back(v.real());
    out.push_back(v.imag());
  }
  return out;
}

std::vector<cplx> deinterleave(const std::vector<double>& data) {
  std::vector<cplx> out(data.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {data[2 * i], data[2 * i + 1]};
  return out;
}

void expect_shape(const Field& f, std::size_t rank, bool complex, const char* what) {
  if (f.header.dims.size() != rank || f.header.is_complex() != complex) {
    throw FormatError(std::string("field file does not hold a ") + what);
  }
}

std::string row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_number(v);
    first = false;
  }
  line += '\n';
  return line;
}

}  // namespace

std::size_t FieldHeader::element_count() const {
  std::size_t count = 1;
  for (auto d : dims) count *= static_cast<std::size_t>(d);
  return count * (is_complex() ? 2 : 1);
}

void write_field(std::ostream& out, const Field& field) {
  const FieldHeader& h = field.header;
  if (field.data.size() != h.element_count()) throw FormatError("field data does not match header dims");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, h.version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(h.dims.size()));
  put<std::uint32_t>(out, h.flags);
  for (auto d : h.dims) put<std::uint64_t>(out, d);
  for (double v : {h.dx, h.dp, h.x_min, h.hbar, h.mass, h.time}) put<double>(out, v);
  for (double v : field.data) put<double>(out, v);
  if (h.flags & kFlagAngles) {
    for (double v : field.trailer) put<double>(out, v);
  }
  if (!out) throw std::runtime_error("write failed");
}

Field read_field(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("not a WIG1 field file");
  Field f;
  f.header.version = get<std::uint32_t>(in);
  if (f.header.version != kFormatVersion) {
    throw FormatError("unsupported field format version " + std::to_string(f.header.version));
  }
  const auto rank = get<std::uint32_t>(in);
  if (rank == 0 || rank > 3) throw FormatError("invalid rank " + std::to_string(rank));
  f.header.flags = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < rank; ++i) f.header.dims.push_back(get<std::uint64_t>(in));
  f.header.dx = get<double>(in);
  f.header.dp = get<double>(in);
  f.header.x_min = get<double>(in);
  f.header.hbar = get<double>(in);
  f.header.mass = get<double>(in);
  f.header.time = get<double>(in);
  const std::size_t count = f.header.element_count();
  f.data.resize(count);
  for (double& v : f.data) v = get<double>(in);
  if (f.header.flags & kFlagAngles) {
    f.trailer.resize(static_cast<std::size_t>(f.header.dims.front()) + 1);
    for (double& v : f.trailer) v = get<double>(in);
  }
  return f;
}

void save(const std::filesystem::path& path, const Wavefunction& psi) {
  const PhaseGrid& g = psi.grid();
  Field f{header_for(g, {g.size()}, kFlagComplex, psi.time()), interleave(psi.samples()), {}};
  auto out = open_out(path);
  write_field(out, f);
}

void save(const std::filesystem::path& path, const WignerFunction& w) {
  const PhaseGrid& g = w.grid();
  Field f{header_for(g, {g.size(), g.size()}, 0, w.time()), {w.values().begin(), w.values().end()}, {}};
  auto out = open_out(path);
  write_field(out, f);
}

void save(const std::filesystem::path& path, const CharacteristicZ& z) {
  const PhaseGrid& g = z.grid();
  Field f{header_for(g, {g.size(), g.size()}, kFlagComplex, z.time()), interleave(z.values()), {}};
  auto out = open_out(path);
  write_field(out, f);
}

void save(const std::filesystem::path& path, const Tomogram& tomo) {
  Field f;
  f.header.flags = kFlagAngles;
  f.header.dims = {tomo.frames(), tomo.X.size()};
  f.header.dx = tomo.dX;
  f.header.dp = tomo.dX;
  f.header.x_min = tomo.X.empty() ? 0.0 : tomo.X.front();
  f.header.hbar = tomo.hbar;
  f.data = tomo.values;
  f.trailer = tomo.angles;
  f.trailer.push_back(tomo.min_raw);
  auto out = open_out(path);
  write_field(out, f);
}

Wavefunction load_wavefunction(const std::filesystem::path& path) {
  Field f = load(path);
  expect_shape(f, 1, true, "wavefunction");
  const auto n = static_cast<std::size_t>(f.header.dims[0]);
  return Wavefunction(grid_from(f.header, n), deinterleave(f.data), f.header.time);
}

WignerFunction load_wigner(const std::filesystem::path& path) {
  Field f = load(path);
  expect_shape(f, 2, false, "Wigner function");
  const auto n = static_cast<std::size_t>(f.header.dims[0]);
  if (f.header.dims[1] != n) throw FormatError("Wigner field must be square");
  return WignerFunction(grid_from(f.header, n), std::move(f.data), f.header.time);
}

CharacteristicZ load_characteristic(const std::filesystem::path& path) {
  Field f = load(path);
  expect_shape(f, 2, true, "characteristic kernel");
  const auto n = static_cast<std::size_t>(f.header.dims[0]);
  if (f.header.dims[1] != n) throw FormatError("characteristic field must be square");
  return CharacteristicZ(grid_from(f.header, n), deinterleave(f.data), f.header.time);
}

Tomogram load_tomogram(const std::filesystem::path& path) {
  Field f = load(path);
  if (f.header.dims.size() != 2 || f.header.is_complex() || !(f.header.flags & kFlagAngles)) {
    throw FormatError("field file does not hold a tomogram");
  }
  Tomogram tomo;
  const auto frames = static_cast<std::size_t>(f.header.dims[0]);
  const auto m = static_cast<std::size_t>(f.header.dims[1]);
  tomo.angles.assign(f.trailer.begin(), f.trailer.begin() + static_cast<std::ptrdiff_t>(frames));
  tomo.min_raw = f.trailer.back();
  tomo.dX = f.header.dx;
  tomo.hbar = f.header.hbar;
  tomo.X.resize(m);
  for (std::size_t i = 0; i < m; ++i) tomo.X[i] = f.header.x_min + static_cast<double>(i) * f.header.dx;
  tomo.values = std::move(f.data);
  return tomo;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const Wavefunction& psi) {
  out << "x,re,im\n";
  const auto s = psi.samples();
  for (std::size_t k = 0; k < s.size(); ++k) out << row({psi.grid().x(k), s[k].real(), s[k].imag()});
}

void write_csv(std::ostream& out, const WignerFunction& w) {
  out << "x,p,W\n";
  const PhaseGrid& g = w.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t j = 0; j < g.size(); ++j) out << row({g.x(k), g.p(j), w(k, j)});
  }
}

void write_csv(std::ostream& out, const Tomogram& tomo) {
  out << "theta,X,w\n";
  for (std::size_t f = 0; f < tomo.frames(); ++f) {
    const auto data = tomo.frame(f);
    for (std::size_t i = 0; i < data.size(); ++i) out << row({tomo.angles[f], tomo.X[i], data[i]});
  }
}

void write_csv(std::ostream& out, const EvolutionReport& report) {
  out << "t,ab,ac,bc,boundary,norm_drift_a,norm_drift_b,norm_drift_c,"
         "energy_drift_a,energy_drift_b,energy_drift_c,factorization_residual\n";
  for (const auto& r : report.rows) {
    out << row({r.t, r.ab, r.ac, r.bc, r.boundary, r.norm_drift_a, r.norm_drift_b, r.norm_drift_c,
                r.energy_drift_a, r.energy_drift_b, r.energy_drift_c, r.factorization_residual});
  }
}

void write_csv(std::ostream& out, std::span<const EhrenfestRow> rows) {
  out << "t,mean_x,mean_p,mean_force,force_at_mean,classical_x,classical_p,position_residual,momentum_residual\n";
  for (const auto& r : rows) {
    const double nan = std::nan("");
    out << row({r.t, r.mean_x, r.mean_p, r.mean_force, r.force_at_mean, r.classical_x, r.classical_p,
                r.has_residuals ? r.position_residual : nan, r.has_residuals ? r.momentum_residual : nan});
  }
}

void write_csv(std::ostream& out, std::span<const double> times, std::span<const MomentReport> moments) {
  if (times.size() != moments.size()) throw std::invalid_argument("times and moments differ in length");
  out << "t,mean_x,mean_p,var_x,var_p,cov_xp,uncertainty_product,blob_area\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& m = moments[i];
    out << row({times[i], m.mean_x, m.mean_p, m.var_x, m.var_p, m.cov_xp, m.uncertainty_product, m.blob_area});
  }
}

std::string to_json(const EvolutionReport& report) { return detail::encode(report).dump(2); }
std::string to_json(const MomentReport& report) { return detail::encode(report).dump(2); }
std::string to_json(std::span<const EhrenfestRow> rows) { return detail::encode(rows).dump(2); }

}  // namespace phasespace::io

namespace phasespace::detail {

using nlohmann::ordered_json;

ordered_json encode(const EvolutionReport& report) {
  ordered_json times = ordered_json::array(), ab = ordered_json::array(), ac = ordered_json::array(),
               bc = ordered_json::array();
  ordered_json boundary = ordered_json::array(), flagged = ordered_json::array(), residual = ordered_json::array();
  ordered_json norm = {{"a", ordered_json::array()}, {"b", ordered_json::array()}, {"c", ordered_json::array()}};
  ordered_json energy = norm;
  for (const auto& r : report.rows) {
    times.push_back(r.t);
    ab.push_back(r.ab);
    ac.push_back(r.ac);
    bc.push_back(r.bc);
    boundary.push_back(r.boundary);
    flagged.push_back(r.boundary_flagged);
    norm["a"].push_back(r.norm_drift_a);
    norm["b"].push_back(r.norm_drift_b);
    norm["c"].push_back(r.norm_drift_c);
    energy["a"].push_back(r.energy_drift_a);
    energy["b"].push_back(r.energy_drift_b);
    energy["c"].push_back(r.energy_drift_c);
    residual.push_back(r.factorization_residual);
  }
  ordered_json out;
  out["times"] = std::move(times);
  out["ab"] = std::move(ab);
  out["ac"] = std::move(ac);
  out["bc"] = std::move(bc);
  out["monitors"] = {{"boundary", std::move(boundary)},
                     {"boundary_flagged", std::move(flagged)},
                     {"norm_drift", std::move(norm)},
                     {"energy_drift", std::move(energy)},
                     {"factorization_residual", std::move(residual)}};
  out["summary"] = {{"max_discrepancy", report.max_discrepancy()},
                    {"max_boundary", report.max_boundary()},
                    {"boundary_flagged", report.boundary_flagged()},
                    {"max_norm_drift", report.max_norm_drift()},
                    {"max_energy_drift", report.max_energy_drift()},
                    {"max_factorization_residual", report.max_factorization_residual()}};
  return out;
}

ordered_json encode(const MomentReport& m) {
  return {{"mean_x", m.mean_x}, {"mean_p", m.mean_p},   {"var_x", m.var_x},
          {"var_p", m.var_p},   {"cov_xp", m.cov_xp},   {"uncertainty_product", m.uncertainty_product},
          {"blob_area", m.blob_area}};
}

ordered_json encode(std::span<const EhrenfestRow> rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json entry = {{"t", r.t},
                          {"mean_x", r.mean_x},
                          {"mean_p", r.mean_p},
                          {"mean_force", r.mean_force},
                          {"force_at_mean", r.force_at_mean},
                          {"classical_x", r.classical_x},
                          {"classical_p", r.classical_p}};
    if (r.has_residuals) {
      entry["position_residual"] = r.position_residual;
      entry["momentum_residual"] = r.momentum_residual;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace phasespace::detail
