#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasespace/dynamics.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/tomography.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace::io {

/// Binary field format. Layout, all little-endian:
///   magic[8] | version u32 | rank u32 | flags u32 | dims u64[rank]
///   | dx dp x_min hbar mass time f64 | data f64[prod(dims) * (complex ? 2 : 1)]
///   | angles f64[dims[0]] and min_raw f64, if flagged
inline constexpr std::array<char, 8> kMagic = {'W', 'I', 'G', '1', '\r', '\n', '\x1a', '\n'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kFlagComplex = 1u << 0;
inline constexpr std::uint32_t kFlagAngles = 1u << 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldHeader {
  std::uint32_t version = kFormatVersion;
  std::uint32_t flags = 0;
  std::vector<std::uint64_t> dims;
  double dx = 0.0;
  double dp = 0.0;
  double x_min = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  double time = 0.0;

  bool is_complex() const noexcept { return (flags & kFlagComplex) != 0; }
  std::size_t element_count() const;
};

struct Field {
  FieldHeader header;
  std::vector<double> data;    ///< interleaved (re, im) when complex
  std::vector<double> trailer;  ///< angles then min_raw, tomograms only
};

void write_field(std::ostream& out, const Field& field);
Field read_field(std::istream& in);

void save(const std::filesystem::path& path, const Wavefunction& psi);
void save(const std::filesystem::path& path, const WignerFunction& w);
void save(const std::filesystem::path& path, const CharacteristicZ& z);
void save(const std::filesystem::path& path, const Tomogram& tomo);

Wavefunction load_wavefunction(const std::filesystem::path& path);
WignerFunction load_wigner(const std::filesystem::path& path);
CharacteristicZ load_characteristic(const std::filesystem::path& path);
Tomogram load_tomogram(const std::filesystem::path& path);

/// Shortest round-trip-safe form, "%.17g".
std::string format_number(double value);

void write_csv(std::ostream& out, const Wavefunction& psi);     ///< x,re,im
void write_csv(std::ostream& out, const WignerFunction& w);     ///< x,p,W
void write_csv(std::ostream& out, const Tomogram& tomo);        ///< theta,X,w
void write_csv(std::ostream& out, const EvolutionReport& report);
void write_csv(std::ostream& out, std::span<const EhrenfestRow> rows);
void write_csv(std::ostream& out, std::span<const double> times, std::span<const MomentReport> moments);

std::string to_json(const EvolutionReport& report);
std::string to_json(const MomentReport& report);
std::string to_json(std::span<const EhrenfestRow> rows);

}  // namespace phasespace::io
