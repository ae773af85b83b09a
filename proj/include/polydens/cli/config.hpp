#pragma once

// Experiment configuration for the command-line harness.
//
// A config is one JSON document; every field is optional:
//
//   {
//     "polynomial":  {"n": 2, "terms": [...]} or "path/to/poly.json",
//     "polynomial2": same forms, the second law for `distance`,
//     "family":      {"n": 3, "m": 1, "d": 3, "count": 10,
//                     "deltas": [0.05, 0.1, 0.2, 0.4]},
//     "samples": 1000000, "grid": 400, "seed": 1, "workers": 0,
//     "eps":    [0.05, 0.1] or {"lo": 0.01, "hi": 1, "per_decade": 12},
//     "t":      [1, 10] or {"lo": 0.1, "hi": 1000, "per_decade": 16},
//     "deltas": [0.02, 0.05, 0.1, 0.2],
//     "out": "out", "svg": false,
//     "test_hooks": {"envelope_exponent": 5.0}
//   }
//
// Relative paths resolve against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polydens/poly.hpp"

namespace polydens::cli {

/// Geometric range, or an explicit list when `values` is set.
struct ProbeSpec {
  double lo = 0.0;
  double hi = 0.0;
  unsigned per_decade = 0;
  std::optional<std::vector<double>> values;

  bool is_default() const noexcept { return !values && per_decade == 0; }
  std::vector<double> resolve() const;
};

struct FamilySpec {
  ClassParams params{3, 1, 3};
  unsigned count = 10;
  /// Perturbation sizes for the distance check, in units of sd f(X).
  std::vector<double> deltas{0.05, 0.1, 0.2, 0.4};
  /// Set when the config or a flag names the family. Single-polynomial
  /// commands without a polynomial then draw one from it.
  bool given = false;
};

struct TestHooks {
  /// Replaces the 1/m exponent in the modulus envelope; verify-all must then fail.
  std::optional<double> envelope_exponent;
};

struct ExperimentConfig {
  std::optional<Polynomial> polynomial;
  std::optional<Polynomial> polynomial2;
  FamilySpec family;
  std::size_t samples = 1'000'000;
  std::size_t grid = 400;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  ProbeSpec eps;  // default: 12 per decade over [max(2 step, 1e-3), 1]
  ProbeSpec t{0.1, 1000.0, 16, std::nullopt};
  std::vector<double> deltas{0.02, 0.05, 0.1, 0.2};
  std::filesystem::path out = "out";
  bool svg = false;
  TestHooks hooks;

  /// Canonical form; also what gets written next to the outputs.
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical form without `out` and `workers`, which do not
  /// change any data output.
  std::uint64_t hash() const;
};

/// Fails with InvalidInput on unknown keys, wrong types or bad values.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Inline JSON (starting with '{') or a path to a JSON file.
Polynomial parse_polynomial_arg(std::string_view arg, const std::filesystem::path& base_dir);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace polydens::cli
