#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fifspec/estimate.hpp"
#include "fifspec/generate.hpp"
#include "fifspec/model.hpp"
#include "fifspec/spectrum.hpp"

namespace fifspec::io {

// {"points": [[x, y], ...], "d": [...]}. Parsing checks every invariant and
// throws FormatError naming the first violation and its index.
FifModel parse_model_json(const std::string& text);
FifModel read_model(const std::filesystem::path& path);
std::string model_to_json(const FifModel& model);

// Points file with only "points"; "d" is ignored when present.
InterpolationSet read_anchors(const std::filesystem::path& path);

// CSV with header "x,y", one row per sample, 17 significant digits.
void write_signal_csv(std::ostream& out, const SampledSignal& signal);
SampledSignal parse_signal_csv(std::istream& in);
SampledSignal read_signal(const std::filesystem::path& path);

// CSV with header "omega,re,im,mag", 15 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
Spectrum parse_spectrum_csv(std::istream& in);

struct EstimationReport {
  std::size_t order = 0;
  EstimationResult result;
  bool window_effect_flag = false;
};

std::string report_to_json(const EstimationReport& report);
EstimationReport parse_report_json(const std::string& text);

std::string detection_to_json(const OrderDetection& detection);
std::string noise_report_to_json(const NoiseExperimentReport& report);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace fifspec::io
