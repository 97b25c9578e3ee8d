#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fifspec/generate.hpp"
#include "fifspec/spectrum.hpp"

namespace fifspec::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  // Dashed vertical guide lines (e.g. expected q period boundaries).
  std::vector<double> guides;
};

// Standalone SVG line plot. Throws FormatError when the file cannot be written.
std::string render_svg(const PlotSpec& spec);
void write_plot(const PlotSpec& spec, const std::filesystem::path& svg_path);

// Writes <path> as SVG and <path with .csv extension> as the backing data.
void emit_plot(const SampledSignal& signal, const std::filesystem::path& path, const std::string& title);
void emit_plot(const Spectrum& spectrum, const std::filesystem::path& path, const std::string& title);

}  // namespace fifspec::cli
