#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fifspec/generate.hpp"
#include "fifspec/model.hpp"
#include "fifspec/numerics.hpp"

namespace fifspec {

struct EstimateOptions {
  // Bins with |f_prev spectrum| below this fraction of its maximum are excluded.
  double exclusion_threshold = 1e-8;
  // Scale each row of the q system by |f_prev spectrum|. Turns the ratio fit
  // into an equation-error fit and keeps low-energy bins from dominating
  // once noise is present. Noiseless results are identical either way.
  bool weight_by_denominator = true;
  double ill_conditioned_above = 1e8;
  // Combined order score = w_p * periodicity + w_s * symmetry + w_r * residual.
  double periodicity_weight = 1.0;
  double symmetry_weight = 1.0;
  double residual_weight = 1.0;
  // detect_order keeps the smallest order scoring within this factor of the best.
  double parsimony_factor = 2.0;
  double parsimony_floor = 1e-9;
  // Periodicity deviation above which the window-effect flag is raised.
  double window_threshold = 0.05;
};

// Sampled q on the estimation grid w^_k = 2 pi k / L, k = 0 .. L-1.
struct QSamples {
  std::vector<double> omega_hat;
  ComplexSequence q;
  std::vector<double> weight;  // |f_prev spectrum| per bin
  std::vector<bool> valid;
  // |f_next spectrum|^2 summed over valid bins; normalises the scores.
  double reference_energy = 0.0;
  std::size_t order = 0;
  std::size_t stride = 0;       // P = (M - 1) / N
  std::size_t grid_length = 0;  // L, a multiple of P with L >= M N
  std::size_t excluded = 0;

  std::size_t bins_per_period() const noexcept { return grid_length / stride; }
};

struct EstimationResult {
  std::vector<double> d_hat;
  // Relative residual of the real solution on the valid bins.
  double residual_norm = 0.0;
  double imaginary_norm = 0.0;
  std::size_t excluded_bins = 0;
  double condition_indicator = 1.0;
  bool ill_conditioned = false;
  double periodicity_deviation = 0.0;
  double symmetry_deviation = 0.0;
  // periodicity_deviation + symmetry_deviation; 0 for a perfect FIF.
  double periodicity_score = 0.0;
};

struct NoiseSpec {
  double snr_db = 20.0;
  std::uint64_t seed = 0;
};

// Keeps every order-th sample.
SampledSignal decimate(const SampledSignal& signal, std::size_t order);

// Smallest multiple of P = (M - 1)/N that is >= M N.
std::size_t estimation_grid_length(std::size_t signal_length, std::size_t order);

// q_k = (F_next_k - G_k) / F_prev_k on the padded grid. Both signals must
// have zero endpoints (normalised frame); the anchors supply G.
QSamples estimate_q(const SampledSignal& f_next, const SampledSignal& f_prev, const InterpolationSet& anchors,
                    std::size_t order, const EstimateOptions& options = {});

// Weighted RMS of q_k - q_{k+B} (B bins per period) relative to the
// signal spectrum energy.
double periodicity_deviation(const QSamples& samples);
// Same for |q_k| against its mirror |q_{B-k}| inside each period.
double symmetry_deviation(const QSamples& samples);

// Least squares over the valid bins for sum_p d_p exp(-i w^ (p-1) P) = q.
EstimationResult solve_d(const QSamples& samples, std::size_t order, const EstimateOptions& options = {});

// Anchors read off the signal at stride (M - 1)/N.
InterpolationSet anchors_from_signal(const SampledSignal& signal, std::size_t order);

struct ModelEstimate {
  FifModel model;
  EstimationResult result;
  // d_hat had to be pulled inside (-1, 1) to build the model.
  bool clamped = false;
};

// estimate_q for a signal in any frame: anchors (read off the signal when
// absent) fix the normalising transform, f_prev is the decimated signal.
QSamples estimate_q_from_signal(const SampledSignal& signal, std::size_t order,
                                const std::optional<InterpolationSet>& anchors = std::nullopt,
                                const EstimateOptions& options = {});

// decimate -> estimate_q -> solve_d -> derive_maps. The signal is moved to
// the normalised frame first and the model is returned in the signal frame.
ModelEstimate estimate_model(const SampledSignal& signal, std::size_t order,
                             const std::optional<InterpolationSet>& anchors = std::nullopt,
                             const EstimateOptions& options = {});

// generate() for a model in any frame: normalise, iterate, map back.
SampledSignal reconstruct(const FifModel& model, int iterations, std::size_t sample_budget = kDefaultSampleBudget);

struct CandidateScore {
  std::size_t order = 0;
  bool feasible = false;
  double periodicity = 0.0;
  double symmetry = 0.0;
  double residual = 0.0;
  double combined = 0.0;
  std::string error;
};

struct OrderDetection {
  std::size_t order = 0;
  std::vector<CandidateScore> candidates;
  bool window_effect = false;
};

// Candidates are 2 <= N <= max_order with N | (M - 1) and (M - 1)/N >= N;
// smaller strides leave no redundancy and fit any signal exactly. An
// order-N FIF is also an order-N^2 FIF, so the smallest order whose score
// is within parsimony_factor of the best wins.
OrderDetection detect_order(const SampledSignal& signal, std::size_t max_order, const EstimateOptions& options = {});

// Zero-mean Gaussian noise, rescaled so the realised mean-square SNR is exact.
SampledSignal add_white_noise(const SampledSignal& signal, const NoiseSpec& noise);

struct NoiseTrial {
  std::uint64_t seed = 0;
  std::vector<double> d_hat;
  double max_abs_error = 0.0;
};

struct NoiseExperimentReport {
  double snr_db = 0.0;
  int iterations = 0;
  std::vector<double> d_true;
  std::vector<NoiseTrial> trials;
  double median_max_abs_error = 0.0;
  double mean_max_abs_error = 0.0;
};

NoiseExperimentReport noise_experiment(const FifModel& model, int iterations, double snr_db, std::size_t seeds,
                                       std::uint64_t first_seed = 1, const EstimateOptions& options = {});

}  // namespace fifspec
