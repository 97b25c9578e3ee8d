#include "fifspec/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "fifspec/errors.hpp"

namespace fifspec {

namespace {

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void require_zero_endpoints(const SampledSignal& signal, const char* name) {
  const double scale = std::max(1.0, max_abs(signal.values));
  if (std::abs(signal.values.front()) > 1e-9 * scale || std::abs(signal.values.back()) > 1e-9 * scale) {
    throw UnsupportedFormError(std::string(name) + " must have zero endpoints; normalise the signal first");
  }
}

Complex grid_phasor(std::size_t bin, std::size_t multiple, std::size_t length) {
  const std::uint64_t r = (static_cast<std::uint64_t>(bin) * multiple) % length;
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(length));
}

// Weighted mean-square mismatch between bin k and partner(k), relative to
// the reference energy of the signal spectrum.
template <typename Partner, typename Mismatch>
double paired_deviation(const QSamples& s, Partner partner, Mismatch mismatch) {
  if (s.grid_length == 0 || s.stride == 0) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    const std::size_t j = partner(k);
    if (!s.valid[k] || !s.valid[j] || j == k) continue;
    const double w = std::min(s.weight[k], s.weight[j]);
    num += w * w * mismatch(s.q[k], s.q[j]);
    den += 1.0;
  }
  if (den == 0.0 || !(s.reference_energy > 0.0)) return 0.0;
  // reference_energy is a sum over valid bins; rescale to a per-bin mean.
  const double valid_bins = static_cast<double>(s.grid_length - s.excluded);
  return std::sqrt((num / den) / (s.reference_energy / valid_bins));
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

SampledSignal decimate(const SampledSignal& signal, std::size_t order) {
  if (order == 0) throw DomainError("decimate: order must be >= 1");
  if (signal.size() < 2 || (signal.size() - 1) % order != 0) {
    throw DomainError("decimate: length " + std::to_string(signal.size()) + " - 1 is not divisible by order " +
                      std::to_string(order));
  }
  SampledSignal out = signal;
  out.values.clear();
  out.values.reserve((signal.size() - 1) / order + 1);
  for (std::size_t j = 0; j < signal.size(); j += order) out.values.push_back(signal.values[j]);
  out.iteration = std::max(0, signal.iteration - 1);
  return out;
}

std::size_t estimation_grid_length(std::size_t signal_length, std::size_t order) {
  if (order == 0 || signal_length < 2 || (signal_length - 1) % order != 0) {
    throw DomainError("estimation grid: signal length and order are incompatible");
  }
  const std::size_t stride = (signal_length - 1) / order;
  const std::size_t target = signal_length * order;
  return stride * ((target + stride - 1) / stride);
}

QSamples estimate_q(const SampledSignal& f_next, const SampledSignal& f_prev, const InterpolationSet& anchors,
                    std::size_t order, const EstimateOptions& options) {
  if (order < 2) throw DomainError("estimate_q: order must be >= 2");
  const std::size_t length = f_next.size();
  if (length < 2 || (length - 1) % order != 0) {
    throw DomainError("estimate_q: (M - 1) = " + std::to_string(length - 1) + " is not divisible by order " +
                      std::to_string(order));
  }
  const std::size_t stride = (length - 1) / order;
  if (f_prev.size() != stride + 1) {
    throw DomainError("estimate_q: f_prev must have (M - 1)/N + 1 = " + std::to_string(stride + 1) + " samples");
  }
  if (anchors.order() != order) throw DomainError("estimate_q: anchor count does not match the order");
  require_zero_endpoints(f_next, "f_next");
  require_zero_endpoints(f_prev, "f_prev");

  InterpolationSet grid_anchors;
  grid_anchors.points.reserve(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    grid_anchors.points.push_back({static_cast<double>(k) / static_cast<double>(order), anchors.points[k].y});
  }
  grid_anchors.points.front().y = 0.0;
  grid_anchors.points.back().y = 0.0;
  const SampledSignal interpolant = linear_interpolant(grid_anchors, length);

  QSamples out;
  out.order = order;
  out.stride = stride;
  out.grid_length = estimation_grid_length(length, order);
  const std::size_t bins = out.grid_length;

  const ComplexSequence next_spec = dft(zero_pad(f_next.values, bins));
  const ComplexSequence prev_spec = dft(zero_pad(f_prev.values, bins));
  const ComplexSequence g_spec = dft(zero_pad(interpolant.values, bins));

  double peak = 0.0;
  for (const Complex& z : prev_spec) peak = std::max(peak, std::abs(z));

  out.omega_hat.resize(bins);
  out.q.assign(bins, Complex{});
  out.weight.resize(bins);
  out.valid.assign(bins, false);
  for (std::size_t k = 0; k < bins; ++k) {
    out.omega_hat[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(bins);
    const double mag = std::abs(prev_spec[k]);
    out.weight[k] = mag;
    if (peak > 0.0 && mag >= options.exclusion_threshold * peak) {
      out.valid[k] = true;
      out.q[k] = (next_spec[k] - g_spec[k]) / prev_spec[k];
      out.reference_energy += std::norm(next_spec[k]);
    } else {
      ++out.excluded;
    }
  }
  if (out.excluded == bins) throw DegenerateSignalError("estimate_q: every bin has a vanishing denominator");
  return out;
}

double periodicity_deviation(const QSamples& samples) {
  const std::size_t period = samples.bins_per_period();
  const std::size_t length = samples.grid_length;
  return paired_deviation(
      samples, [=](std::size_t k) { return (k + period) % length; },
      [](Complex a, Complex b) { return std::norm(a - b); });
}

double symmetry_deviation(const QSamples& samples) {
  const std::size_t period = samples.bins_per_period();
  return paired_deviation(
      samples,
      [=](std::size_t k) {
        const std::size_t offset = k % period;
        return k - offset + (period - offset) % period;
      },
      [](Complex a, Complex b) {
        const double diff = std::abs(a) - std::abs(b);
        return diff * diff;
      });
}

EstimationResult solve_d(const QSamples& samples, std::size_t order, const EstimateOptions& options) {
  if (order < 1) throw DomainError("solve_d: order must be >= 1");
  if (samples.q.size() != samples.grid_length || samples.valid.size() != samples.grid_length ||
      samples.weight.size() != samples.grid_length) {
    throw DomainError("solve_d: inconsistent sample arrays");
  }
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < samples.grid_length; ++k) {
    if (samples.valid[k]) rows.push_back(k);
  }
  if (rows.size() < order) {
    throw UnderdeterminedError("solve_d: " + std::to_string(rows.size()) + " usable bins for order " +
                               std::to_string(order));
  }

  ComplexMatrix design(rows.size(), order);
  ComplexSequence rhs(rows.size());
  double rhs_scale = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t k = rows[r];
    const double w = options.weight_by_denominator ? samples.weight[k] : 1.0;
    for (std::size_t p = 0; p < order; ++p) {
      design(r, p) = w * grid_phasor(k, p * samples.stride, samples.grid_length);
    }
    rhs[r] = w * samples.q[k];
    rhs_scale += std::norm(rhs[r]);
  }

  const LeastSquaresResult ls = least_squares(design, rhs);

  EstimationResult out;
  out.d_hat.resize(order);
  ComplexSequence real_solution(order);
  double imag = 0.0;
  for (std::size_t p = 0; p < order; ++p) {
    out.d_hat[p] = ls.solution[p].real();
    real_solution[p] = Complex{ls.solution[p].real(), 0.0};
    imag += ls.solution[p].imag() * ls.solution[p].imag();
  }
  out.imaginary_norm = std::sqrt(imag);

  const ComplexSequence fitted = multiply(design, real_solution);
  double res = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) res += std::norm(fitted[r] - rhs[r]);
  // Relative to the valid-bin signal energy when weighted, so an all-zero q
  // (a pure interpolant) does not look like a bad fit.
  double reference = rhs_scale;
  if (options.weight_by_denominator && samples.reference_energy > 0.0) reference = samples.reference_energy;
  out.residual_norm = reference > 0.0 ? std::sqrt(res / reference) : std::sqrt(res);

  out.excluded_bins = samples.excluded;
  out.condition_indicator = ls.condition;
  out.ill_conditioned = ls.condition > options.ill_conditioned_above;
  out.periodicity_deviation = periodicity_deviation(samples);
  out.symmetry_deviation = symmetry_deviation(samples);
  out.periodicity_score = out.periodicity_deviation + out.symmetry_deviation;
  return out;
}

InterpolationSet anchors_from_signal(const SampledSignal& signal, std::size_t order) {
  if (order < 2 || signal.size() < 2 || (signal.size() - 1) % order != 0) {
    throw DomainError("anchors_from_signal: signal length " + std::to_string(signal.size()) +
                      " is incompatible with order " + std::to_string(order));
  }
  const std::size_t stride = (signal.size() - 1) / order;
  InterpolationSet anchors;
  anchors.points.reserve(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    anchors.points.push_back({signal.abscissa(k * stride), signal.values[k * stride]});
  }
  anchors.points.back().x = signal.x_end;
  return anchors;
}

namespace {

struct FramedSamples {
  InterpolationSet anchors;
  QSamples samples;
};

FramedSamples framed_q(const SampledSignal& signal, std::size_t order, const std::optional<InterpolationSet>& anchors,
                       const EstimateOptions& options) {
  FramedSamples out;
  out.anchors = anchors ? *anchors : anchors_from_signal(signal, order);
  if (out.anchors.order() != order) throw DomainError("estimate_model: anchor count does not match the order");

  const VerticalScalings zero{std::vector<double>(order, 0.0)};
  const Normalized norm = normalize(derive_maps(out.anchors, zero));
  SampledSignal local = transform_signal(signal, norm.aux);
  local.x_start = 0.0;
  local.x_end = 1.0;
  const double scale = std::max(1.0, max_abs(local.values));
  if (std::abs(local.values.front()) <= 1e-9 * scale) local.values.front() = 0.0;
  if (std::abs(local.values.back()) <= 1e-9 * scale) local.values.back() = 0.0;

  const SampledSignal prev = decimate(local, order);
  out.samples = estimate_q(local, prev, norm.model.anchors, order, options);
  return out;
}

}  // namespace

QSamples estimate_q_from_signal(const SampledSignal& signal, std::size_t order,
                                const std::optional<InterpolationSet>& anchors, const EstimateOptions& options) {
  return framed_q(signal, order, anchors, options).samples;
}

ModelEstimate estimate_model(const SampledSignal& signal, std::size_t order,
                             const std::optional<InterpolationSet>& anchors, const EstimateOptions& options) {
  const FramedSamples framed = framed_q(signal, order, anchors, options);

  ModelEstimate out;
  out.result = solve_d(framed.samples, order, options);
  VerticalScalings scalings{out.result.d_hat};
  const double limit = std::nextafter(1.0, 0.0);
  for (double& d : scalings.d) {
    if (!(std::abs(d) < 1.0)) {
      d = std::clamp(d, -limit, limit);
      out.clamped = true;
    }
  }
  out.model = derive_maps(framed.anchors, scalings);
  return out;
}

SampledSignal reconstruct(const FifModel& model, int iterations, std::size_t sample_budget) {
  if (model.canonical) return generate(model, iterations, sample_budget);
  const Normalized norm = normalize(model);
  if (!norm.model.canonical) {
    throw UnsupportedFormError("reconstruct: anchors are not evenly spaced, so the model has no canonical form");
  }
  return untransform_signal(generate(norm.model, iterations, sample_budget), norm.aux);
}

OrderDetection detect_order(const SampledSignal& signal, std::size_t max_order, const EstimateOptions& options) {
  if (max_order < 2) throw DomainError("detect_order: max_order must be >= 2");
  if (signal.size() < 3) throw UndetectableOrderError("detect_order: signal too short");
  const std::size_t intervals = signal.size() - 1;

  OrderDetection out;
  for (std::size_t n = 2; n <= max_order; ++n) {
    if (intervals % n != 0 || intervals / n < n) continue;
    CandidateScore cand;
    cand.order = n;
    try {
      const ModelEstimate est = estimate_model(signal, n, std::nullopt, options);
      cand.periodicity = est.result.periodicity_deviation;
      cand.symmetry = est.result.symmetry_deviation;
      cand.residual = est.result.residual_norm;
      cand.combined = options.periodicity_weight * cand.periodicity + options.symmetry_weight * cand.symmetry +
                      options.residual_weight * cand.residual;
      cand.feasible = std::isfinite(cand.combined);
    } catch (const Error& e) {
      cand.error = e.what();
    }
    if (!cand.feasible) cand.combined = std::numeric_limits<double>::infinity();
    out.candidates.push_back(std::move(cand));
  }
  if (out.candidates.empty()) {
    throw UndetectableOrderError("detect_order: no order in [2, " + std::to_string(max_order) +
                                 "] divides M - 1 = " + std::to_string(intervals) + " with enough redundancy");
  }

  double best = std::numeric_limits<double>::infinity();
  for (const CandidateScore& c : out.candidates) best = std::min(best, c.combined);
  if (!std::isfinite(best)) throw UndetectableOrderError("detect_order: every candidate order failed");

  const double accept = options.parsimony_factor * best + options.parsimony_floor;
  const auto chosen = std::find_if(out.candidates.begin(), out.candidates.end(),
                                   [accept](const CandidateScore& c) { return c.combined <= accept; });
  out.order = chosen->order;
  out.window_effect = chosen->periodicity > options.window_threshold;
  return out;
}

SampledSignal add_white_noise(const SampledSignal& signal, const NoiseSpec& noise) {
  if (!std::isfinite(noise.snr_db)) throw DomainError("add_white_noise: SNR must be finite");
  if (signal.size() == 0) throw DomainError("add_white_noise: empty signal");
  double power = 0.0;
  for (double v : signal.values) power += v * v;
  power /= static_cast<double>(signal.size());
  if (!(power > 0.0)) throw DomainError("add_white_noise: signal has zero power");

  std::mt19937_64 engine(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> draw(signal.size());
  double drawn = 0.0;
  for (double& v : draw) {
    v = gauss(engine);
    drawn += v * v;
  }
  drawn /= static_cast<double>(draw.size());
  const double target = power * std::pow(10.0, -noise.snr_db / 10.0);
  const double gain = drawn > 0.0 ? std::sqrt(target / drawn) : 0.0;

  SampledSignal out = signal;
  for (std::size_t j = 0; j < out.size(); ++j) out.values[j] += gain * draw[j];
  return out;
}

NoiseExperimentReport noise_experiment(const FifModel& model, int iterations, double snr_db, std::size_t seeds,
                                       std::uint64_t first_seed, const EstimateOptions& options) {
  const SampledSignal clean = reconstruct(model, iterations);
  const std::size_t order = model.order();

  NoiseExperimentReport report;
  report.snr_db = snr_db;
  report.iterations = iterations;
  report.d_true = model.scalings.d;
  report.trials.resize(seeds);

  auto run_trial = [&](std::size_t t) {
    NoiseTrial trial;
    trial.seed = first_seed + t;
    const SampledSignal noisy = add_white_noise(clean, {snr_db, trial.seed});
    const ModelEstimate est = estimate_model(noisy, order, std::nullopt, options);
    trial.d_hat = est.result.d_hat;
    for (std::size_t p = 0; p < order; ++p) {
      trial.max_abs_error = std::max(trial.max_abs_error, std::abs(trial.d_hat[p] - model.scalings.d[p]));
    }
    return trial;
  };

  // Seeds fan out; each trial depends only on its own seed.
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), seeds));
  std::vector<std::future<void>> pending;
  for (std::size_t w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t t = w; t < seeds; t += workers) report.trials[t] = run_trial(t);
    }));
  }
  for (auto& f : pending) f.get();

  std::vector<double> errors;
  double sum = 0.0;
  for (const NoiseTrial& t : report.trials) {
    errors.push_back(t.max_abs_error);
    sum += t.max_abs_error;
  }
  report.median_max_abs_error = median(errors);
  report.mean_max_abs_error = seeds > 0 ? sum / static_cast<double>(seeds) : 0.0;
  return report;
}

}  // namespace fifspec
