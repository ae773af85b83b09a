#pragma once

// The five subcommands of the harness. Each writes its data files and a
// summary.json under config.out, then a manifest.json listing every file.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polydens/cli/config.hpp"
#include "polydens/error.hpp"

namespace polydens::cli {

/// 0 all verdicts pass, 2 a verdict failed, 3 bad input, 4 below resolution
/// or inside the noise floor.
enum class ExitCode : int { Ok = 0, VerdictFailure = 2, InputError = 3, ResolutionError = 4 };

ExitCode exit_code_for(Errc code) noexcept;

inline constexpr std::string_view kToolVersion = POLYDENS_VERSION;

/// Records every file written under one directory for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  void write(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& j);

  /// Wall-clock seconds per named stage; only the manifest carries them.
  void add_timing(std::string stage, double seconds);

  /// Writes manifest.json: config hash, tool version, command, files with
  /// sizes and FNV-1a digests, timings.
  void write_manifest(const ExperimentConfig& config, std::string_view command);

 private:
  struct Entry {
    std::string name;
    std::uintmax_t bytes;
    std::uint64_t digest;
  };
  std::filesystem::path root_;
  std::vector<Entry> files_;
  std::vector<std::pair<std::string, double>> timings_;
};

ExitCode cmd_variance(const ExperimentConfig& config, OutputDir& out, std::ostream& log);
ExitCode cmd_modulus(const ExperimentConfig& config, OutputDir& out, std::ostream& log);
ExitCode cmd_cf(const ExperimentConfig& config, OutputDir& out, std::ostream& log);
ExitCode cmd_distance(const ExperimentConfig& config, OutputDir& out, std::ostream& log);
ExitCode cmd_verify_all(const ExperimentConfig& config, OutputDir& out, std::ostream& log);

/// Dispatches by name. Library errors become an exit code and an error
/// summary.json; the manifest is written either way.
ExitCode run_command(std::string_view name, const ExperimentConfig& config, std::ostream& log);

}  // namespace polydens::cli
