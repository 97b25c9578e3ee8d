#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fifspec/errors.hpp"
#include "fifspec/estimate.hpp"
#include "fifspec/io.hpp"
#include "json.hpp"
#include "plot.hpp"

namespace fifspec::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kFigureSeed = 7;
constexpr std::size_t kSpectrumPad = 4;

FifModel fig5_model() {
  return derive_maps({{{0.0, 0.0}, {0.25, 1.0}, {0.5, 1.4}, {0.75, -0.5}, {1.0, 0.0}}}, {{0.3, -0.4, 0.5, 0.2}});
}

FifModel fig7_model() {
  return derive_maps({{{0.0, 0.0}, {0.2, 0.6}, {0.4, -0.3}, {0.6, 0.8}, {0.8, 0.2}, {1.0, 0.0}}},
                     {{-0.74, 0.8, -0.77, 0.85, 0.88}});
}

Series signal_series(const SampledSignal& signal, const std::string& label) {
  Series s;
  s.label = label;
  for (std::size_t j = 0; j < signal.size(); ++j) s.x.push_back(signal.abscissa(j));
  s.y = signal.values;
  return s;
}

// Magnitudes of the first half of a DFT spectrum, which is conjugate symmetric.
Spectrum half_spectrum(const Spectrum& full) {
  Spectrum half;
  half.kind = full.kind;
  const std::size_t count = full.size() / 2 + 1;
  half.frequencies.assign(full.frequencies.begin(), full.frequencies.begin() + static_cast<std::ptrdiff_t>(count));
  half.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(count));
  return half;
}

void attractor_and_spectrum(const FifModel& model, int m, const std::filesystem::path& dir, const std::string& stem,
                            std::size_t budget) {
  const SampledSignal signal = reconstruct(model, m, budget);
  emit_plot(signal, dir / (stem + "_attractor_m" + std::to_string(m) + ".svg"),
            "Attractor after " + std::to_string(m) + " iterations");
  const Spectrum spectrum = half_spectrum(dft_of_signal(signal, kSpectrumPad));
  emit_plot(spectrum, dir / (stem + "_spectrum_m" + std::to_string(m) + ".svg"),
            "Magnitude spectrum after " + std::to_string(m) + " iterations");
}

void fig2(const std::filesystem::path& dir, std::size_t budget) {
  const FifModel model = fig5_model();
  PlotSpec overlay{"Discrete FIF iterations from the anchor initiator", "x", "y", {}, {}};
  for (int m = 1; m <= 5; ++m) {
    const SampledSignal signal = reconstruct(model, m, budget);
    emit_plot(signal, dir / ("fig2_iteration_" + std::to_string(m) + ".svg"), "Iteration " + std::to_string(m));
    overlay.series.push_back(signal_series(signal, "m = " + std::to_string(m)));
  }
  write_plot(overlay, dir / "fig2_iterations.svg");
}

void fig5(const std::filesystem::path& dir, std::size_t budget) {
  for (int m : {1, 3, 5}) attractor_and_spectrum(fig5_model(), m, dir, "fig5", budget);
}

void fig6(const std::filesystem::path& dir, std::size_t budget, const EstimateOptions& options) {
  const FifModel model = fig5_model();
  const int m = 5;
  const SampledSignal clean = reconstruct(model, m, budget);

  struct Case {
    std::string name;
    SampledSignal signal;
    double snr_db;
  };
  const std::vector<Case> cases = {{"clean", clean, INFINITY},
                                   {"snr20", add_white_noise(clean, {20.0, kFigureSeed}), 20.0},
                                   {"snr10", add_white_noise(clean, {10.0, kFigureSeed}), 10.0}};

  json summary{{"d_true", model.scalings.d}, {"iterations", m}, {"seed", kFigureSeed}, {"cases", json::array()}};
  for (const Case& c : cases) {
    const ModelEstimate estimate = estimate_model(c.signal, model.order(), std::nullopt, options);
    const SampledSignal rebuilt = reconstruct(estimate.model, m, budget);
    emit_plot(c.signal, dir / ("fig6_" + c.name + "_signal.svg"), "Input signal (" + c.name + ")");
    emit_plot(rebuilt, dir / ("fig6_" + c.name + "_reconstruction.svg"), "Reconstruction (" + c.name + ")");
    write_plot({"Input and reconstruction (" + c.name + ")",
                "x",
                "y",
                {signal_series(c.signal, "input"), signal_series(rebuilt, "reconstruction")},
                {}},
               dir / ("fig6_" + c.name + "_overlay.svg"));

    double max_error = 0.0;
    for (std::size_t n = 0; n < model.order(); ++n) {
      max_error = std::max(max_error, std::abs(estimate.result.d_hat[n] - model.scalings.d[n]));
    }
    json entry{{"case", c.name}, {"d_hat", estimate.result.d_hat}, {"max_abs_error", max_error},
               {"residual", estimate.result.residual_norm}};
    entry["snr_db"] = std::isfinite(c.snr_db) ? json(c.snr_db) : json(nullptr);
    summary["cases"].push_back(entry);
  }
  io::write_file_atomic(dir / "fig6_summary.json", summary.dump(2) + "\n");
}

void fig7(const std::filesystem::path& dir, std::size_t budget) {
  attractor_and_spectrum(fig7_model(), 5, dir, "fig7", budget);
}

Spectrum q_magnitude(const QSamples& samples) {
  Spectrum s;
  s.kind = SpectrumKind::kDftOfSignal;
  for (std::size_t k = 0; k < samples.q.size(); ++k) {
    if (!samples.valid[k]) continue;
    s.frequencies.push_back(samples.omega_hat[k]);
    s.values.push_back(samples.q[k]);
  }
  return s;
}

Series q_series(const Spectrum& q, double upto, const std::string& label) {
  Series s;
  s.label = label;
  for (std::size_t k = 0; k < q.size() && q.frequencies[k] <= upto; ++k) {
    s.x.push_back(q.frequencies[k]);
    s.y.push_back(std::abs(q.values[k]));
  }
  return s;
}

void fig8(const std::filesystem::path& dir, std::size_t budget, const EstimateOptions& options) {
  const FifModel model = fig5_model();
  const std::size_t n = model.order();
  const SampledSignal full = reconstruct(model, 5, budget);

  // 60% contiguous window, trimmed so that N still divides its length minus one.
  const std::size_t start = 100;
  std::size_t length = (full.size() * 3) / 5;
  length -= (length - 1) % n;
  SampledSignal segment;
  segment.order = n;
  segment.x_start = full.abscissa(start);
  segment.x_end = full.abscissa(start + length - 1);
  segment.values.assign(full.values.begin() + static_cast<std::ptrdiff_t>(start),
                        full.values.begin() + static_cast<std::ptrdiff_t>(start + length));

  const QSamples truth = estimate_q_from_signal(full, n, std::nullopt, options);
  const QSamples windowed = estimate_q_from_signal(segment, n, std::nullopt, options);
  const Spectrum q_truth = q_magnitude(truth);
  const Spectrum q_window = q_magnitude(windowed);

  const double period = 2.0 * std::numbers::pi / static_cast<double>(truth.stride);
  PlotSpec plot{"q magnitude: true FIF vs 60% window", "omega-hat (rad/sample)", "|q|", {}, {}};
  plot.series.push_back(q_series(q_truth, 4.0 * period, "true FIF"));
  plot.series.push_back(q_series(q_window, 4.0 * period, "windowed segment"));
  for (int k = 0; k <= 4; ++k) plot.guides.push_back(k * period);
  write_plot(plot, dir / "fig8_q.svg");

  std::ostringstream truth_csv;
  io::write_spectrum_csv(truth_csv, q_truth);
  io::write_file_atomic(dir / "fig8_q_true.csv", truth_csv.str());
  std::ostringstream window_csv;
  io::write_spectrum_csv(window_csv, q_window);
  io::write_file_atomic(dir / "fig8_q_window.csv", window_csv.str());

  const double p_truth = periodicity_deviation(truth);
  const double p_window = periodicity_deviation(windowed);
  json summary{{"expected_period", period},
               {"segment_start", start},
               {"segment_length", length},
               {"periodicity_true", p_truth},
               {"periodicity_window", p_window},
               {"window_effect_flag_true", p_truth > options.window_threshold},
               {"window_effect_flag_window", p_window > options.window_threshold}};
  io::write_file_atomic(dir / "fig8_summary.json", summary.dump(2) + "\n");
}

}  // namespace

void reproduce_figures(const std::filesystem::path& out_dir, const RunConfig& config, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw FormatError("cannot create output directory " + out_dir.string());
  }
  EstimateOptions options;
  if (config.tolerance) options.exclusion_threshold = *config.tolerance;

  fig2(out_dir, config.budget);
  fig5(out_dir, config.budget);
  fig6(out_dir, config.budget, options);
  fig7(out_dir, config.budget);
  fig8(out_dir, config.budget, options);
  out << "wrote figure scenarios to " << out_dir.string() << '\n';
}

}  // namespace fifspec::cli
