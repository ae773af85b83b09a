#pragma once

// File formats shared by the CLI and test fixtures.
//
//   polynomial:   {"n": int, "terms": [{"exp": [j1, ..., jn], "coef": float}]}
//   samples:      raw little-endian float64 values, plus a JSON sidecar
//                 {"seed": u64, "N": count, "polynomial": {...}}
//   density CSV:  "x,density" header, one row per bin center
//   curve CSV:    "eps,value" (modulus curves) or "t,modulus,stderr"

#include <filesystem>
#include <string>

#include <json.hpp>

#include "polydens/density.hpp"
#include "polydens/poly.hpp"

namespace polydens {

nlohmann::json polynomial_to_json(const Polynomial& f);
/// Validates shape, exponent lengths and types; duplicate exponents add up.
Polynomial polynomial_from_json(const nlohmann::json& j);
Polynomial load_polynomial(const std::filesystem::path& path);

/// Writes <stem>.bin and <stem>.json.
void write_samples(const std::filesystem::path& stem, const SampleSet& s, const Polynomial& f);
struct LoadedSamples {
  SampleSet samples;
  Polynomial polynomial{1};
};
LoadedSamples read_samples(const std::filesystem::path& stem);

std::string density_csv(const GriddedDensity& rho);
void write_density_csv(const std::filesystem::path& path, const GriddedDensity& rho);

/// Shortest round-trip representation of a double.
std::string format_double(double x);

/// Writes text and fails with Errc::Io on error.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace polydens
