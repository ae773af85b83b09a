// polydens: batch harness over the polydens library.
//
//   polydens <variance|modulus|cf|distance|verify-all> [--config FILE] [flags]
//
// Flags override the matching config fields. Exit codes: 0 all verdicts pass,
// 2 a verdict failed, 3 input error, 4 resolution or noise-floor error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "polydens/cli/commands.hpp"
#include "polydens/cli/config.hpp"
#include "polydens/error.hpp"

namespace {

using polydens::cli::ExitCode;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> n, m, d, count, workers;
  std::optional<std::size_t> samples, grid;
  std::optional<std::string> poly, poly2;
  bool svg = false;
  std::optional<double> corrupt_exponent;
};

polydens::cli::ExperimentConfig resolve(const Overrides& o) {
  namespace fs = std::filesystem;
  auto c = o.config_path.empty() ? polydens::cli::ExperimentConfig{} : polydens::cli::load_config(o.config_path);
  if (o.poly) c.polynomial = polydens::cli::parse_polynomial_arg(*o.poly, fs::current_path());
  if (o.poly2) c.polynomial2 = polydens::cli::parse_polynomial_arg(*o.poly2, fs::current_path());
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.samples) c.samples = *o.samples;
  if (o.grid) c.grid = *o.grid;
  if (o.workers) c.workers = *o.workers;
  if (o.n || o.m || o.d || o.count) c.family.given = true;
  if (o.n) c.family.params.n = *o.n;
  if (o.m) c.family.params.m = *o.m;
  if (o.d) c.family.params.d = *o.d;
  if (o.count) c.family.count = *o.count;
  if (o.svg) c.svg = true;
  if (o.corrupt_exponent) c.hooks.envelope_exponent = *o.corrupt_exponent;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densities of polynomials in Gaussian variables: moduli of continuity and decay checks"};
  app.set_version_flag("--version", std::string(polydens::cli::kToolVersion));
  app.require_subcommand(1);

  Overrides o;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--n", o.n, "random family: number of variables")->check(CLI::Range(1u, 64u));
    sub->add_option("--m", o.m, "random family: max power of one variable")->check(CLI::Range(1u, 64u));
    sub->add_option("--d", o.d, "random family: total degree")->check(CLI::Range(1u, 64u));
    sub->add_option("--samples", o.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    sub->add_option("--grid", o.grid, "histogram bins")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20));
    sub->add_option("--workers", o.workers, "threads, 0 = hardware concurrency");
    sub->add_option("--poly", o.poly, "polynomial as inline JSON or a file path");
    sub->add_flag("--svg", o.svg, "also render SVG charts");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"variance", "exact variance by two methods plus a Monte Carlo estimate"},
      {"modulus", "moduli of continuity of the density and their envelope checks"},
      {"cf", "empirical characteristic function decay"},
      {"distance", "TV and KR distances along a perturbation or between two polynomials"},
      {"verify-all", "every check over a random polynomial family"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string_view(name) == "distance") sub->add_option("--poly2", o.poly2, "second polynomial");
    if (std::string_view(name) == "verify-all") {
      sub->add_option("--count", o.count, "number of random polynomials");
      sub->add_option("--corrupt-envelope-exponent", o.corrupt_exponent,
                      "test hook: replace the envelope exponent 1/m")
          ->check(CLI::PositiveNumber)
          ->group("Testing");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::InputError);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const auto config = resolve(o);
    return static_cast<int>(polydens::cli::run_command(name, config, std::cout));
  } catch (const polydens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(polydens::cli::exit_code_for(e.code()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::InputError);
  }
}
