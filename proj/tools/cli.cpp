#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fifspec/errors.hpp"
#include "fifspec/estimate.hpp"
#include "fifspec/io.hpp"
#include "json.hpp"
#include "plot.hpp"

namespace fifspec::cli {

namespace {

using nlohmann::json;

std::size_t budget_from_environment() {
  const char* raw = std::getenv("FIFSPEC_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultSampleBudget;
  const std::string text(raw);
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw FormatError("FIFSPEC_BUDGET is not a non-negative integer: '" + text + "'");
  }
}

SpectrumKind parse_kind(const std::string& name) {
  if (name == "continuous") return SpectrumKind::kContinuousAnalytic;
  if (name == "dtft") return SpectrumKind::kDtftIterative;
  if (name == "dft") return SpectrumKind::kDftOfSignal;
  throw FormatError("unknown spectrum kind '" + name + "' (expected continuous, dtft or dft)");
}

void check_order(std::size_t order, const char* what) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw DomainError(std::string(what) + " must be in [" + std::to_string(kMinOrder) + ", " +
                      std::to_string(kMaxOrder) + "], got " + std::to_string(order));
  }
}

void check_samples(std::size_t order, int iterations, std::size_t budget) {
  const std::size_t samples = sample_count(order, iterations);
  if (samples == 0 || samples > budget) {
    throw ResourceError(std::to_string(order) + "^" + std::to_string(iterations) +
                        " + 1 samples exceed the sample budget of " + std::to_string(budget));
  }
}

int require_iterations(const RunConfig& config) {
  if (!config.iterations) throw FormatError("--iters is required");
  return *config.iterations;
}

FifModel load_model(const RunConfig& config) {
  if (config.model.empty()) throw FormatError("--model is required");
  FifModel model = io::read_model(config.model);
  check_order(model.order(), "model order");
  return model;
}

SampledSignal load_signal(const RunConfig& config) {
  if (config.signal.empty()) throw FormatError("--signal is required");
  return io::read_signal(config.signal);
}

EstimateOptions estimate_options(const RunConfig& config) {
  EstimateOptions options;
  if (config.tolerance) options.exclusion_threshold = *config.tolerance;
  return options;
}

std::string csv_text(const SampledSignal& signal) {
  std::ostringstream out;
  io::write_signal_csv(out, signal);
  return out.str();
}

std::string csv_text(const Spectrum& spectrum) {
  std::ostringstream out;
  io::write_spectrum_csv(out, spectrum);
  return out.str();
}

void run_generate(const RunConfig& config, std::ostream& out) {
  const FifModel model = load_model(config);
  const int m = require_iterations(config);
  check_samples(model.order(), m, config.budget);
  SampledSignal signal = reconstruct(model, m, config.budget);

  if (m >= 1) {
    const double tol = config.tolerance.value_or(kDefaultAnchorTolerance);
    const std::size_t stride = (signal.size() - 1) / model.order();
    for (std::size_t k = 0; k <= model.order(); ++k) {
      const double want = model.anchors.points[k].y;
      if (std::abs(signal.values[k * stride] - want) > tol * std::max(1.0, std::abs(want))) {
        throw DomainError("generated signal misses anchor " + std::to_string(k) + " beyond tolerance");
      }
    }
  }
  if (config.snr_db) signal = add_white_noise(signal, {*config.snr_db, config.seed});

  io::write_file_atomic(config.out, csv_text(signal));
  if (!config.plot.empty()) emit_plot(signal, config.plot, "FIF attractor, m = " + std::to_string(m));
  out << "wrote " << signal.size() << " samples to " << config.out.string() << '\n';
}

void run_spectrum(const RunConfig& config, std::ostream& out) {
  Spectrum spectrum;
  switch (config.kind) {
    case SpectrumKind::kContinuousAnalytic: {
      const FifModel model = load_model(config);
      if (config.points < 2) throw DomainError("--points must be >= 2");
      if (config.points > config.budget) throw ResourceError("--points exceeds the sample budget");
      std::vector<double> omegas(config.points);
      for (std::size_t k = 0; k < config.points; ++k) {
        omegas[k] = -config.omega_max + 2.0 * config.omega_max * static_cast<double>(k) /
                                            static_cast<double>(config.points - 1);
      }
      spectrum = spectrum_continuous(model, omegas, config.tolerance.value_or(kDefaultTruncationTolerance));
      break;
    }
    case SpectrumKind::kDtftIterative: {
      const FifModel model = load_model(config);
      const int m = require_iterations(config);
      check_samples(model.order(), m, config.budget);
      const std::size_t length = sample_count(model.order(), m) * config.pad;
      if (length / config.pad != sample_count(model.order(), m) || length > config.budget) {
        throw ResourceError("padded grid exceeds the sample budget");
      }
      spectrum = dtft_iterative(model, m, dft_grid(length));
      break;
    }
    case SpectrumKind::kDftOfSignal: {
      SampledSignal signal;
      if (!config.signal.empty()) {
        signal = load_signal(config);
      } else {
        const FifModel model = load_model(config);
        const int m = require_iterations(config);
        check_samples(model.order(), m, config.budget);
        signal = reconstruct(model, m, config.budget);
      }
      if (signal.size() * config.pad > config.budget) throw ResourceError("padded signal exceeds the sample budget");
      spectrum = dft_of_signal(signal, config.pad);
      break;
    }
  }
  io::write_file_atomic(config.out, csv_text(spectrum));
  if (!config.plot.empty()) emit_plot(spectrum, config.plot, std::string("Spectrum (") + to_string(config.kind) + ")");
  out << "wrote " << spectrum.size() << " frequencies to " << config.out.string() << '\n';
}

void run_estimate(const RunConfig& config, std::ostream& out) {
  const SampledSignal signal = load_signal(config);
  std::optional<InterpolationSet> anchors;
  if (!config.anchors.empty()) anchors = io::read_anchors(config.anchors);
  const EstimateOptions options = estimate_options(config);
  const ModelEstimate estimate = estimate_model(signal, config.order, anchors, options);

  io::EstimationReport report;
  report.order = config.order;
  report.result = estimate.result;
  report.window_effect_flag = estimate.result.periodicity_deviation > options.window_threshold;
  io::write_file_atomic(config.out, io::report_to_json(report));
  if (!config.model_out.empty()) io::write_file_atomic(config.model_out, io::model_to_json(estimate.model));
  out << "estimated " << config.order << " scalings, residual " << estimate.result.residual_norm << '\n';
}

void run_detect_order(const RunConfig& config, std::ostream& out) {
  const SampledSignal signal = load_signal(config);
  const OrderDetection detection = detect_order(signal, config.max_order, estimate_options(config));
  io::write_file_atomic(config.out, io::detection_to_json(detection));
  out << "detected order " << detection.order << '\n';
}

void run_noise_experiment(const RunConfig& config, std::ostream& out) {
  const FifModel model = load_model(config);
  const int m = require_iterations(config);
  check_samples(model.order(), m, config.budget);
  if (!config.snr_db) throw FormatError("--snr is required");
  const NoiseExperimentReport report =
      noise_experiment(model, m, *config.snr_db, config.seeds, config.seed, estimate_options(config));
  io::write_file_atomic(config.out, io::noise_report_to_json(report));
  out << "median max|d_hat - d| = " << report.median_max_abs_error << " over " << report.trials.size()
      << " seeds\n";
}

const char* kind_name(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e) != nullptr) return "format";
  if (dynamic_cast<const ResourceError*>(&e) != nullptr) return "resource";
  if (dynamic_cast<const DomainError*>(&e) != nullptr) return "domain";
  return "internal";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e) != nullptr) return kExitFormat;
  if (dynamic_cast<const ResourceError*>(&e) != nullptr) return kExitResource;
  return kExitDomain;
}

void report_error(std::ostream& err, const char* kind, int code, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"exit_code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig config;
  std::string kind = "dft";
  std::optional<std::size_t> budget;

  CLI::App app{"Fractal interpolation function generation, spectra and parameter estimation", "fifspec"};
  app.require_subcommand(1);

  CLI::App* gen = app.add_subcommand("generate", "Generate a discrete FIF from a model file");
  gen->add_option("--model", config.model, "Model JSON")->required();
  gen->add_option("--iters", config.iterations, "Iterations m (N^m + 1 samples)")->required();
  gen->add_option("--out", config.out, "Output signal CSV")->required();
  gen->add_option("--plot", config.plot, "Optional SVG plot");
  gen->add_option("--snr", config.snr_db, "Add white noise at this SNR in dB");
  gen->add_option("--seed", config.seed, "Noise seed");

  CLI::App* spec = app.add_subcommand("spectrum", "Compute a spectrum from a model or a signal");
  spec->add_option("--model", config.model, "Model JSON");
  spec->add_option("--signal", config.signal, "Signal CSV (dft only)");
  spec->add_option("--kind", kind, "continuous, dtft or dft");
  spec->add_option("--iters", config.iterations, "Iterations m for dtft/dft from a model");
  spec->add_option("--pad", config.pad, "Zero-padding factor");
  spec->add_option("--omega-max", config.omega_max, "Continuous grid spans [-omega-max, omega-max]");
  spec->add_option("--points", config.points, "Continuous grid size");
  spec->add_option("--out", config.out, "Output spectrum CSV")->required();
  spec->add_option("--plot", config.plot, "Optional SVG magnitude plot");

  CLI::App* est = app.add_subcommand("estimate", "Estimate vertical scalings from a signal");
  est->add_option("--signal", config.signal, "Signal CSV")->required();
  est->add_option("--order", config.order, "Number of maps N")->required();
  est->add_option("--anchors", config.anchors, "Optional points JSON");
  est->add_option("--out", config.out, "Output report JSON")->required();
  est->add_option("--model-out", config.model_out, "Optional estimated model JSON");

  CLI::App* det = app.add_subcommand("detect-order", "Detect the number of maps of a signal");
  det->add_option("--signal", config.signal, "Signal CSV")->required();
  det->add_option("--max-order", config.max_order, "Largest candidate order");
  det->add_option("--out", config.out, "Output JSON")->required();

  CLI::App* noise = app.add_subcommand("noise-experiment", "Monte-Carlo estimation under white noise");
  noise->add_option("--model", config.model, "Model JSON")->required();
  noise->add_option("--iters", config.iterations, "Iterations m")->required();
  noise->add_option("--snr", config.snr_db, "SNR in dB")->required();
  noise->add_option("--seeds", config.seeds, "Number of seeds");
  noise->add_option("--first-seed,--seed", config.seed, "First seed");
  noise->add_option("--out", config.out, "Output report JSON")->required();

  CLI::App* figs = app.add_subcommand("reproduce-figures", "Write the bundled figure scenarios");
  figs->add_option("--out-dir", config.out_dir, "Output directory")->required();

  for (CLI::App* sub : {gen, spec, est, det, noise, figs}) {
    sub->add_option("--tolerance", config.tolerance, "Numeric tolerance (meaning depends on the subcommand)");
    sub->add_option("--budget", budget, "Maximum number of samples to allocate");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, out);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw FormatError(e.what());
  }

  if (gen->parsed()) config.subcommand = Subcommand::kGenerate;
  if (spec->parsed()) config.subcommand = Subcommand::kSpectrum;
  if (est->parsed()) config.subcommand = Subcommand::kEstimate;
  if (det->parsed()) config.subcommand = Subcommand::kDetectOrder;
  if (noise->parsed()) config.subcommand = Subcommand::kNoiseExperiment;
  if (figs->parsed()) config.subcommand = Subcommand::kReproduceFigures;
  config.kind = parse_kind(kind);
  config.budget = budget ? *budget : budget_from_environment();
  return config;
}

void check_bounds(const RunConfig& config) {
  if (config.iterations && *config.iterations < 0) throw DomainError("--iters must be >= 0");
  if (config.pad < 1) throw DomainError("--pad must be >= 1");
  if (config.tolerance && !(*config.tolerance > 0.0 && std::isfinite(*config.tolerance))) {
    throw DomainError("--tolerance must be positive and finite");
  }
  if (config.snr_db && !std::isfinite(*config.snr_db)) throw DomainError("--snr must be finite");
  if (!(config.omega_max > 0.0 && std::isfinite(config.omega_max))) throw DomainError("--omega-max must be positive");
  switch (config.subcommand) {
    case Subcommand::kEstimate:
      check_order(config.order, "--order");
      break;
    case Subcommand::kDetectOrder:
      check_order(config.max_order, "--max-order");
      break;
    case Subcommand::kNoiseExperiment:
      if (config.seeds < 1) throw DomainError("--seeds must be >= 1");
      break;
    default:
      break;
  }
}

void execute(const RunConfig& config, std::ostream& out) {
  switch (config.subcommand) {
    case Subcommand::kGenerate: return run_generate(config, out);
    case Subcommand::kSpectrum: return run_spectrum(config, out);
    case Subcommand::kEstimate: return run_estimate(config, out);
    case Subcommand::kDetectOrder: return run_detect_order(config, out);
    case Subcommand::kNoiseExperiment: return run_noise_experiment(config, out);
    case Subcommand::kReproduceFigures: return reproduce_figures(config.out_dir, config, out);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_arguments(args, out);
    if (!config) return kExitSuccess;
    check_bounds(*config);
    execute(*config, out);
    return kExitSuccess;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(err, kind_name(e), code, e.what());
    return code;
  } catch (const std::bad_alloc&) {
    report_error(err, "resource", kExitResource, "out of memory");
    return kExitResource;
  } catch (const std::exception& e) {
    report_error(err, "domain", kExitDomain, e.what());
    return kExitDomain;
  }
}

}  // namespace fifspec::cli
