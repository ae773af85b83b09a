#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "polydens/error.hpp"
#include "polydens/io.hpp"

namespace polydens {

using nlohmann::json;

json polynomial_to_json(const Polynomial& f) {
  json terms = json::array();
  for (const auto& [exps, c] : f.terms()) {
    terms.push_back({{"exp", std::vector<unsigned>(exps.exponents().begin(), exps.exponents().end())}, {"coef", c}});
  }
  return {{"n", f.dimension()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::InvalidInput, "polynomial must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    fail(Errc::InvalidInput, "polynomial needs an integer \"n\" >= 1");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<long long>());
  if (!j.contains("terms") || !j["terms"].is_array()) fail(Errc::InvalidInput, "polynomial needs a \"terms\" array");
  Polynomial f(n);
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coef")) {
      fail(Errc::InvalidInput, "each term needs \"exp\" and \"coef\"");
    }
    const auto& e = t["exp"];
    if (!e.is_array() || e.size() != n) {
      fail(Errc::InvalidInput, "exponent vector length must equal n = " + std::to_string(n));
    }
    std::vector<unsigned> exps;
    exps.reserve(n);
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 64) {
        fail(Errc::InvalidInput, "exponents must be integers in [0, 64]");
      }
      exps.push_back(static_cast<unsigned>(v.get<long long>()));
    }
    if (!t["coef"].is_number() || !std::isfinite(t["coef"].get<double>())) {
      fail(Errc::InvalidInput, "coefficients must be finite numbers");
    }
    f.add_term(MultiIndex(std::move(exps)), t["coef"].get<double>());
  }
  return f;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::filesystem::path& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidInput, path.string() + ": " + e.what());
  }
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

}  // namespace

Polynomial load_polynomial(const std::filesystem::path& path) {
  return polynomial_from_json(parse_json(read_text(path), path));
}

void write_samples(const std::filesystem::path& stem, const SampleSet& s, const Polynomial& f) {
  const auto bin = with_suffix(stem, ".bin");
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + bin.string());
  std::array<char, 8> buf;
  for (double v : s.values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (auto& b : buf) {
      b = static_cast<char>(bits & 0xffu);
      bits >>= 8;
    }
    out.write(buf.data(), buf.size());
  }
  if (!out) fail(Errc::Io, "short write to " + bin.string());
  const json meta = {{"seed", s.seed}, {"N", s.count()}, {"polynomial", polynomial_to_json(f)}};
  write_text_file(with_suffix(stem, ".json"), meta.dump(2) + "\n");
}

LoadedSamples read_samples(const std::filesystem::path& stem) {
  const auto meta_path = with_suffix(stem, ".json");
  const json meta = parse_json(read_text(meta_path), meta_path);
  if (!meta.contains("seed") || !meta.contains("N") || !meta.contains("polynomial")) {
    fail(Errc::InvalidInput, meta_path.string() + ": sidecar needs seed, N and polynomial");
  }
  LoadedSamples out;
  out.polynomial = polynomial_from_json(meta["polynomial"]);
  out.samples.seed = meta["seed"].get<std::uint64_t>();
  const auto count = meta["N"].get<std::size_t>();
  const std::string raw = read_text(with_suffix(stem, ".bin"));
  if (raw.size() != 8 * count) fail(Errc::InvalidInput, "sample file length disagrees with N");
  out.samples.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(raw[8 * k + static_cast<std::size_t>(b)]);
    out.samples.values[k] = std::bit_cast<double>(bits);
  }
  return out;
}

std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string density_csv(const GriddedDensity& rho) {
  std::string text = "x,density\n";
  for (std::size_t i = 0; i < rho.size(); ++i) {
    text += format_double(rho.center(i));
    text += ',';
    text += format_double(rho.values()[i]);
    text += '\n';
  }
  return text;
}

void write_density_csv(const std::filesystem::path& path, const GriddedDensity& rho) {
  write_text_file(path, density_csv(rho));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(Errc::Io, "short write to " + path.string());
}

}  // namespace polydens
