#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phasespace/io.hpp"

using namespace phasespace;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "phasespace_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <typename T>
T read_le(const std::string& b, std::size_t at) {
  T v;
  std::memcpy(&v, b.data() + at, sizeof(T));
  return v;
}

}  // namespace

TEST_CASE("binary header layout") {
  const auto g = make_grid(64, -8.0, 8.0, 0.5, 2.0);
  const auto psi = gaussian_packet(g, 0.0, 0.0, 1.0);
  const auto path = scratch("psi.wig1");
  io::save(path, psi);
  const std::string b = bytes_of(path);
  REQUIRE(b.size() == 8 + 12 + 8 + 48 + 64 * 16);
  CHECK(b.compare(0, 8, std::string(io::kMagic.begin(), io::kMagic.end())) == 0);
  CHECK(read_le<std::uint32_t>(b, 8) == io::kFormatVersion);
  CHECK(read_le<std::uint32_t>(b, 12) == 1);
  CHECK(read_le<std::uint32_t>(b, 16) == io::kFlagComplex);
  CHECK(read_le<std::uint64_t>(b, 20) == 64);
  CHECK(read_le<double>(b, 28) == g.dx());
  CHECK(read_le<double>(b, 36) == g.dp());
  CHECK(read_le<double>(b, 44) == g.x_min());
  CHECK(read_le<double>(b, 52) == 0.5);
  CHECK(read_le<double>(b, 60) == 2.0);
  CHECK(read_le<double>(b, 76) == psi[0].real());
  CHECK(read_le<double>(b, 84) == psi[0].imag());
}

TEST_CASE("fields round-trip bit-exactly") {
  const auto g = make_grid(64, -7.3, 9.1, 0.7, 1.3);
  auto psi = gaussian_packet(g, 0.5, 0.3, 1.1);
  psi.set_time(0.125);
  io::save(scratch("a.wig1"), psi);
  const auto psi2 = io::load_wavefunction(scratch("a.wig1"));
  CHECK(psi2.grid() == g);
  CHECK(psi2.time() == 0.125);
  CHECK(std::equal(psi.samples().begin(), psi.samples().end(), psi2.samples().begin()));

  const auto w = wigner_transform(psi);
  io::save(scratch("w.wig1"), w);
  const auto w2 = io::load_wigner(scratch("w.wig1"));
  CHECK(w2.grid() == g);
  CHECK(std::equal(w.values().begin(), w.values().end(), w2.values().begin()));

  const auto z = to_characteristic(w);
  io::save(scratch("z.wig1"), z);
  const auto z2 = io::load_characteristic(scratch("z.wig1"));
  CHECK(std::equal(z.values().begin(), z.values().end(), z2.values().begin()));

  const auto sq = make_square_grid(32);
  const auto tomo = forward_tomogram(wigner_transform(gaussian_packet(sq, 0.5, 0.0, 0.9)), equispaced_angles(5));
  io::save(scratch("t.wig1"), tomo);
  const auto t2 = io::load_tomogram(scratch("t.wig1"));
  CHECK(t2.angles == tomo.angles);
  CHECK(t2.values == tomo.values);
  CHECK(t2.min_raw == tomo.min_raw);
  CHECK(t2.X == tomo.X);

  CHECK_THROWS_AS(io::load_wigner(scratch("a.wig1")), io::FormatError);
}

TEST_CASE("bad files are rejected") {
  std::ofstream(scratch("junk.wig1"), std::ios::binary) << "not a field";
  CHECK_THROWS_AS(io::load_wavefunction(scratch("junk.wig1")), io::FormatError);
  const auto g = make_grid(16, -4.0, 4.0);
  io::save(scratch("short.wig1"), gaussian_packet(g, 0.0, 0.0, 0.5));
  const std::string b = bytes_of(scratch("short.wig1"));
  std::ofstream(scratch("short.wig1"), std::ios::binary | std::ios::trunc) << b.substr(0, b.size() - 3);
  CHECK_THROWS_AS(io::load_wavefunction(scratch("short.wig1")), io::FormatError);
}

TEST_CASE("csv uses 17 significant digits and reloads exactly") {
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_number(1.0 / 3.0)) == 1.0 / 3.0);

  const auto sq = make_square_grid(16);
  const auto tomo = forward_tomogram(wigner_transform(gaussian_packet(sq, 0.0, 0.0, 0.7)), equispaced_angles(2));
  std::ostringstream out;
  io::write_csv(out, tomo);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,X,w");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const std::size_t f = rows / 16, i = rows % 16;
    CHECK(std::stod(line.substr(0, c1)) == tomo.angles[f]);
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == tomo.X[i]);
    CHECK(std::stod(line.substr(c2 + 1)) == tomo.frame(f)[i]);
    ++rows;
  }
  CHECK(rows == 32);

  std::ostringstream wf;
  io::write_csv(wf, gaussian_packet(sq, 0.0, 0.0, 0.7));
  CHECK(wf.str().rfind("x,re,im\n", 0) == 0);
  std::ostringstream wc;
  io::write_csv(wc, wigner_transform(gaussian_packet(sq, 0.0, 0.0, 0.7)));
  CHECK(wc.str().rfind("x,p,W\n", 0) == 0);
}

TEST_CASE("evolution report json carries the route pairs and monitors") {
  EvolutionReport report;
  report.rows.push_back({});
  report.rows.back().t = 0.5;
  report.rows.back().ab = 1e-9;
  const std::string json = io::to_json(report);
  for (const char* key : {"\"ab\"", "\"ac\"", "\"bc\"", "\"monitors\"", "\"boundary\"", "\"norm_drift\"", "\"energy_drift\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
}
