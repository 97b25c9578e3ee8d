#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fifspec/generate.hpp"
#include "fifspec/spectrum.hpp"

namespace fifspec::cli {

enum class Subcommand { kGenerate, kSpectrum, kEstimate, kDetectOrder, kNoiseExperiment, kReproduceFigures };

enum ExitCode : int { kExitSuccess = 0, kExitFormat = 2, kExitDomain = 3, kExitResource = 4 };

inline constexpr std::size_t kMinOrder = 2;
inline constexpr std::size_t kMaxOrder = 64;

struct RunConfig {
  Subcommand subcommand = Subcommand::kGenerate;

  std::filesystem::path model;
  std::filesystem::path signal;
  std::filesystem::path anchors;
  std::filesystem::path out;
  std::filesystem::path model_out;
  std::filesystem::path plot;
  std::filesystem::path out_dir;

  std::optional<int> iterations;
  std::size_t order = 0;
  std::size_t max_order = 16;
  std::size_t pad = 4;
  SpectrumKind kind = SpectrumKind::kDftOfSignal;
  double omega_max = 100.0;
  std::size_t points = 1001;
  std::optional<double> snr_db;
  std::uint64_t seed = 1;
  std::size_t seeds = 20;

  // Meaning depends on the subcommand: truncation tolerance for continuous
  // spectra, bin exclusion threshold for estimation, anchor check for generate.
  std::optional<double> tolerance;
  std::size_t budget = kDefaultSampleBudget;
};

inline constexpr double kDefaultAnchorTolerance = 1e-12;

// Returns nullopt when help was requested and printed to out. Throws
// FormatError for malformed command lines; the budget falls back to the
// FIFSPEC_BUDGET environment variable when --budget is absent.
std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::ostream& out);

// Throws DomainError for options outside their documented bounds.
void check_bounds(const RunConfig& config);

// Runs a validated config; throws the library error types.
void execute(const RunConfig& config, std::ostream& out);

// Parse, check and execute. Errors are written to err as a one-line JSON
// object and mapped onto ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Bundled figure scenarios with pinned seeds, written under out_dir.
void reproduce_figures(const std::filesystem::path& out_dir, const RunConfig& config, std::ostream& out);

}  // namespace fifspec::cli
