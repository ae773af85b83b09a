#include "polydens/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "polydens/error.hpp"
#include "polydens/functionals.hpp"
#include "polydens/io.hpp"

namespace polydens::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::InvalidInput, "config: " + what); }

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t lo, std::uint64_t hi) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    bad(std::string(key) + " must be a nonnegative integer");
  }
  const auto x = v.get<std::uint64_t>();
  if (x < lo || x > hi) bad(std::string(key) + " is out of range");
  return x;
}

double get_positive(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x <= 0.0) bad(std::string(key) + " must be positive and finite");
  return x;
}

std::vector<double> positive_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a nonempty array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() <= 0.0) {
      bad(std::string(what) + " entries must be positive numbers");
    }
    out.push_back(v.get<double>());
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (!(out[k] > out[k - 1])) bad(std::string(what) + " must be strictly increasing");
  }
  return out;
}

ProbeSpec probe_from_json(const json& j, const char* what) {
  ProbeSpec p;
  if (j.is_array()) {
    p.values = positive_list(j, what);
    return p;
  }
  if (!j.is_object()) bad(std::string(what) + " must be an array or {lo, hi, per_decade}");
  for (const auto& [key, _] : j.items()) {
    if (key != "lo" && key != "hi" && key != "per_decade") bad(std::string(what) + ": unknown key '" + key + "'");
  }
  p.lo = get_positive(j, "lo");
  p.hi = get_positive(j, "hi");
  p.per_decade = static_cast<unsigned>(get_uint(j, "per_decade", 1, 1000));
  if (!(p.hi > p.lo)) bad(std::string(what) + ": hi must exceed lo");
  return p;
}

json probe_to_json(const ProbeSpec& p) {
  if (p.values) return *p.values;
  if (p.is_default()) return nullptr;
  return {{"lo", p.lo}, {"hi", p.hi}, {"per_decade", p.per_decade}};
}

Polynomial polynomial_field(const json& v, const fs::path& base_dir) {
  if (v.is_string()) return load_polynomial(base_dir / v.get<std::string>());
  if (v.is_object()) return polynomial_from_json(v);
  bad("polynomial must be an inline object or a file path");
}

}  // namespace

std::vector<double> ProbeSpec::resolve() const {
  if (values) return *values;
  return geometric_grid(lo, hi, per_decade);
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["polynomial"] = polynomial ? polynomial_to_json(*polynomial) : json(nullptr);
  j["polynomial2"] = polynomial2 ? polynomial_to_json(*polynomial2) : json(nullptr);
  if (family.given) {
    j["family"] = {{"n", family.params.n}, {"m", family.params.m}, {"d", family.params.d},
                   {"count", family.count}, {"deltas", family.deltas}};
  }
  j["samples"] = samples;
  j["grid"] = grid;
  j["seed"] = seed;
  j["workers"] = workers;
  j["eps"] = probe_to_json(eps);
  j["t"] = probe_to_json(t);
  j["deltas"] = deltas;
  j["out"] = out.generic_string();
  j["svg"] = svg;
  j["test_hooks"] = json::object();
  if (hooks.envelope_exponent) j["test_hooks"]["envelope_exponent"] = *hooks.envelope_exponent;
  return j;
}

std::uint64_t ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("out");
  j.erase("workers");
  return fnv1a(j.dump());
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) bad("top level must be an object");
  static const std::set<std::string> known{"polynomial", "polynomial2", "family", "samples", "grid", "seed",
                                           "workers",    "eps",         "t",      "deltas",  "out",  "svg",
                                           "test_hooks"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) bad("unknown key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("polynomial") && !j["polynomial"].is_null()) c.polynomial = polynomial_field(j["polynomial"], base_dir);
    if (j.contains("polynomial2") && !j["polynomial2"].is_null()) {
      c.polynomial2 = polynomial_field(j["polynomial2"], base_dir);
    }
    if (j.contains("family")) {
      const json& f = j["family"];
      if (!f.is_object()) bad("family must be an object");
      c.family.given = true;
      for (const auto& [key, _] : f.items()) {
        if (key != "n" && key != "m" && key != "d" && key != "count" && key != "deltas") bad("family: unknown key '" + key + "'");
      }
      if (f.contains("n")) c.family.params.n = static_cast<unsigned>(get_uint(f, "n", 1, 64));
      if (f.contains("m")) c.family.params.m = static_cast<unsigned>(get_uint(f, "m", 1, 64));
      if (f.contains("d")) c.family.params.d = static_cast<unsigned>(get_uint(f, "d", 1, 64));
      if (f.contains("count")) c.family.count = static_cast<unsigned>(get_uint(f, "count", 0, 100000));
      if (f.contains("deltas")) c.family.deltas = positive_list(f["deltas"], "family.deltas");
    }
    if (j.contains("samples")) c.samples = get_uint(j, "samples", 1, std::uint64_t{1} << 36);
    if (j.contains("grid")) c.grid = get_uint(j, "grid", 16, 1u << 20);
    if (j.contains("seed")) c.seed = get_uint(j, "seed", 0, UINT64_MAX);
    if (j.contains("workers")) c.workers = static_cast<unsigned>(get_uint(j, "workers", 0, 1024));
    if (j.contains("eps") && !j["eps"].is_null()) c.eps = probe_from_json(j["eps"], "eps");
    if (j.contains("t") && !j["t"].is_null()) c.t = probe_from_json(j["t"], "t");
    if (j.contains("deltas")) c.deltas = positive_list(j["deltas"], "deltas");
    if (j.contains("out")) {
      if (!j["out"].is_string()) bad("out must be a string");
      c.out = base_dir / j["out"].get<std::string>();
    }
    if (j.contains("svg")) {
      if (!j["svg"].is_boolean()) bad("svg must be true or false");
      c.svg = j["svg"].get<bool>();
    }
    if (j.contains("test_hooks")) {
      const json& h = j["test_hooks"];
      if (!h.is_object()) bad("test_hooks must be an object");
      for (const auto& [key, _] : h.items()) {
        if (key != "envelope_exponent") bad("test_hooks: unknown key '" + key + "'");
      }
      if (h.contains("envelope_exponent")) c.hooks.envelope_exponent = get_positive(h, "envelope_exponent");
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidInput, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

Polynomial parse_polynomial_arg(std::string_view arg, const fs::path& base_dir) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && arg[first] == '{') {
    try {
      return polynomial_from_json(json::parse(arg));
    } catch (const json::parse_error& e) {
      fail(Errc::InvalidInput, std::string("polynomial argument is not valid JSON: ") + e.what());
    }
  }
  return load_polynomial(base_dir / fs::path(std::string(arg)));
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace polydens::cli
