#include "fifspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fifspec/errors.hpp"
#include "json.hpp"

namespace fifspec::io {

namespace {

using nlohmann::json;

std::string format_number(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

double as_number(const json& node, const std::string& where) {
  if (!node.is_number()) throw FormatError(where + " is not a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw FormatError(where + " is not finite");
  return v;
}

InterpolationSet parse_points(const json& doc) {
  if (!doc.is_object() || !doc.contains("points")) throw FormatError("model: missing \"points\"");
  const json& pts = doc["points"];
  if (!pts.is_array()) throw FormatError("model: \"points\" must be an array");
  InterpolationSet anchors;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::string where = "points[" + std::to_string(k) + "]";
    if (!pts[k].is_array() || pts[k].size() != 2) throw FormatError(where + " must be an [x, y] pair");
    anchors.points.push_back({as_number(pts[k][0], where + "[0]"), as_number(pts[k][1], where + "[1]")});
    if (k > 0 && !(anchors.points[k].x > anchors.points[k - 1].x)) {
      throw FormatError(where + ": abscissas must be strictly increasing");
    }
  }
  if (anchors.points.size() < 3) throw FormatError("model: need at least 3 points, got " + std::to_string(pts.size()));
  return anchors;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw FormatError("row " + std::to_string(row) + ": not a number: '" + cell + "'");
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

json result_fields(const EstimationResult& r) {
  return json{{"d_hat", r.d_hat},
              {"residual", r.residual_norm},
              {"excluded_bins", r.excluded_bins},
              {"condition", r.condition_indicator},
              {"periodicity_score", r.periodicity_score}};
}

}  // namespace

FifModel parse_model_json(const std::string& text) {
  const json doc = parse_json(text);
  InterpolationSet anchors = parse_points(doc);
  if (!doc.contains("d") || !doc["d"].is_array()) throw FormatError("model: missing \"d\" array");
  VerticalScalings scalings;
  for (std::size_t k = 0; k < doc["d"].size(); ++k) {
    const std::string where = "d[" + std::to_string(k) + "]";
    const double d = as_number(doc["d"][k], where);
    if (!(std::abs(d) < 1.0)) throw FormatError(where + ": |d| must be < 1");
    scalings.d.push_back(d);
  }
  if (scalings.size() != anchors.order()) {
    throw FormatError("model: expected " + std::to_string(anchors.order()) + " entries in \"d\", got " +
                      std::to_string(scalings.size()));
  }
  return derive_maps(anchors, scalings);
}

FifModel read_model(const std::filesystem::path& path) { return parse_model_json(read_file(path)); }

InterpolationSet read_anchors(const std::filesystem::path& path) { return parse_points(parse_json(read_file(path))); }

std::string model_to_json(const FifModel& model) {
  json pts = json::array();
  for (const Point& p : model.anchors.points) pts.push_back({p.x, p.y});
  return json{{"points", pts}, {"d", model.scalings.d}}.dump(2) + "\n";
}

void write_signal_csv(std::ostream& out, const SampledSignal& signal) {
  out << "x,y\n";
  for (std::size_t j = 0; j < signal.size(); ++j) {
    out << format_number(signal.abscissa(j), 17) << ',' << format_number(signal.values[j], 17) << '\n';
  }
}

SampledSignal parse_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("signal: empty file");
  strip_cr(line);
  if (line != "x,y") throw FormatError("signal: expected header \"x,y\", got '" + line + "'");
  std::vector<double> xs;
  SampledSignal signal;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != 2) throw FormatError("row " + std::to_string(row) + ": expected 2 columns");
    const double x = parse_cell(cells[0], row);
    if (!xs.empty() && !(x > xs.back())) {
      throw FormatError("row " + std::to_string(row) + ": abscissas must be increasing");
    }
    xs.push_back(x);
    signal.values.push_back(parse_cell(cells[1], row));
  }
  if (xs.size() < 2) throw FormatError("signal: need at least 2 samples");
  signal.x_start = xs.front();
  signal.x_end = xs.back();
  const double step = (signal.x_end - signal.x_start) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(xs[j] - signal.abscissa(j)) > 1e-9 * std::max(1.0, std::abs(step) * static_cast<double>(xs.size()))) {
      throw FormatError("row " + std::to_string(j + 2) + ": samples are not uniformly spaced");
    }
  }
  return signal;
}

SampledSignal read_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open signal file " + path.string());
  return parse_signal_csv(in);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "omega,re,im,mag\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const Complex z = spectrum.values[k];
    out << format_number(spectrum.frequencies[k], 15) << ',' << format_number(z.real(), 15) << ','
        << format_number(z.imag(), 15) << ',' << format_number(std::abs(z), 15) << '\n';
  }
}

Spectrum parse_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("spectrum: empty file");
  strip_cr(line);
  if (line != "omega,re,im,mag") throw FormatError("spectrum: expected header \"omega,re,im,mag\"");
  Spectrum spectrum;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != 4) throw FormatError("row " + std::to_string(row) + ": expected 4 columns");
    spectrum.frequencies.push_back(parse_cell(cells[0], row));
    spectrum.values.emplace_back(parse_cell(cells[1], row), parse_cell(cells[2], row));
  }
  return spectrum;
}

std::string report_to_json(const EstimationReport& report) {
  json doc = result_fields(report.result);
  doc["order"] = report.order;
  doc["window_effect_flag"] = report.window_effect_flag;
  return doc.dump(2) + "\n";
}

EstimationReport parse_report_json(const std::string& text) {
  const json doc = parse_json(text);
  try {
    EstimationReport r;
    r.order = doc.at("order").get<std::size_t>();
    r.result.d_hat = doc.at("d_hat").get<std::vector<double>>();
    r.result.residual_norm = doc.at("residual").get<double>();
    r.result.excluded_bins = doc.at("excluded_bins").get<std::size_t>();
    r.result.condition_indicator = doc.at("condition").get<double>();
    r.result.periodicity_score = doc.at("periodicity_score").get<double>();
    r.window_effect_flag = doc.at("window_effect_flag").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("estimation report: ") + e.what());
  }
}

std::string detection_to_json(const OrderDetection& detection) {
  json candidates = json::array();
  for (const CandidateScore& c : detection.candidates) {
    json entry{{"order", c.order}, {"feasible", c.feasible}};
    if (c.feasible) {
      entry["periodicity"] = c.periodicity;
      entry["symmetry"] = c.symmetry;
      entry["residual"] = c.residual;
      entry["score"] = c.combined;
    } else {
      entry["error"] = c.error;
    }
    candidates.push_back(entry);
  }
  return json{{"order", detection.order}, {"window_effect_flag", detection.window_effect}, {"candidates", candidates}}
             .dump(2) +
         "\n";
}

std::string noise_report_to_json(const NoiseExperimentReport& report) {
  json trials = json::array();
  for (const NoiseTrial& t : report.trials) {
    trials.push_back({{"seed", t.seed}, {"d_hat", t.d_hat}, {"max_abs_error", t.max_abs_error}});
  }
  return json{{"snr_db", report.snr_db},
              {"iterations", report.iterations},
              {"d_true", report.d_true},
              {"seeds", report.trials.size()},
              {"median_max_abs_error", report.median_max_abs_error},
              {"mean_max_abs_error", report.mean_max_abs_error},
              {"trials", trials}}
             .dump(2) +
         "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fifspec::io
