#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fifspec/errors.hpp"
#include "fifspec/io.hpp"

namespace fifspec::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();
};

std::filesystem::path csv_sibling(const std::filesystem::path& svg) {
  std::filesystem::path csv = svg;
  csv.replace_extension(".csv");
  return csv;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Bounds b;
  std::size_t points = 0;
  for (const Series& s : spec.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      b.x0 = std::min(b.x0, s.x[i]);
      b.x1 = std::max(b.x1, s.x[i]);
      b.y0 = std::min(b.y0, s.y[i]);
      b.y1 = std::max(b.y1, s.y[i]);
      ++points;
    }
  }
  if (points == 0) throw DomainError("plot: no finite data to draw");
  if (b.x1 == b.x0) b.x1 = b.x0 + 1.0;
  if (b.y1 == b.y0) {
    b.y0 -= 0.5;
    b.y1 += 0.5;
  }
  const double pad = 0.05 * (b.y1 - b.y0);
  b.y0 -= pad;
  b.y1 += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - b.x0) / (b.x1 - b.x0) * plot_w; };
  auto py = [&](double y) { return kTop + (b.y1 - y) / (b.y1 - b.y0) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
      << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 5; ++t) {
    const double xv = b.x0 + (b.x1 - b.x0) * t / 5.0;
    const double yv = b.y0 + (b.y1 - b.y0) * t / 5.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << px(xv) << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">" << num(xv)
        << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft << "\" y2=\"" << py(yv)
        << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (double g : spec.guides) {
    if (g < b.x0 || g > b.x1) continue;
    svg << "<line x1=\"" << px(g) << "\" y1=\"" << kTop << "\" x2=\"" << px(g) << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#888\" stroke-dasharray=\"4 4\"/>\n";
  }

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const Series& series = spec.series[s];
    const char* color = kColors[s % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < std::min(series.x.size(), series.y.size()); ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
      svg << num(px(series.x[i]), 7) << ',' << num(py(series.y[i]), 7) << ' ';
    }
    svg << "\"/>\n";
    if (!series.label.empty()) {
      const double ly = kTop + 16 + 16 * static_cast<double>(s);
      svg << "<line x1=\"" << kWidth - 190 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - 170 << "\" y2=\""
          << ly - 4 << "\" stroke=\"" << color << "\"/>";
      svg << "<text x=\"" << kWidth - 165 << "\" y=\"" << ly << "\">" << escape(series.label) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_plot(const PlotSpec& spec, const std::filesystem::path& svg_path) {
  io::write_file_atomic(svg_path, render_svg(spec));
}

void emit_plot(const SampledSignal& signal, const std::filesystem::path& path, const std::string& title) {
  if (signal.size() == 0) throw DomainError("plot: empty signal");
  Series series;
  series.x.reserve(signal.size());
  for (std::size_t j = 0; j < signal.size(); ++j) series.x.push_back(signal.abscissa(j));
  series.y = signal.values;
  write_plot({title, "x", "y", {series}, {}}, path);
  std::ostringstream csv;
  io::write_signal_csv(csv, signal);
  io::write_file_atomic(csv_sibling(path), csv.str());
}

void emit_plot(const Spectrum& spectrum, const std::filesystem::path& path, const std::string& title) {
  if (spectrum.size() == 0) throw DomainError("plot: empty spectrum");
  Series series;
  series.x = spectrum.frequencies;
  series.y.reserve(spectrum.size());
  for (const Complex& z : spectrum.values) series.y.push_back(std::abs(z));
  const char* x_label = spectrum.kind == SpectrumKind::kContinuousAnalytic ? "omega (rad)" : "omega-hat (rad/sample)";
  write_plot({title, x_label, "magnitude", {series}, {}}, path);
  std::ostringstream csv;
  io::write_spectrum_csv(csv, spectrum);
  io::write_file_atomic(csv_sibling(path), csv.str());
}

}  // namespace fifspec::cli
