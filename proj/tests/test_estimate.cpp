#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fifspec/errors.hpp"
#include "fifspec/estimate.hpp"
#include "fifspec/spectrum.hpp"
#include "oracles.hpp"

using namespace fifspec;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return err;
}

// q samples built straight from the closed form, every bin usable.
QSamples synthetic_samples(const FifModel& model, int m) {
  QSamples s;
  s.order = model.order();
  const std::size_t samples = sample_count(model.order(), m);
  s.stride = (samples - 1) / model.order();
  s.grid_length = estimation_grid_length(samples, model.order());
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(s.grid_length);
    s.omega_hat.push_back(w);
    s.q.push_back(q_discrete(model, m, w));
    s.weight.push_back(1.0);
    s.valid.push_back(true);
  }
  s.reference_energy = 1.0;
  return s;
}

SampledSignal segment_of(const SampledSignal& full, std::size_t start, std::size_t length) {
  SampledSignal seg;
  seg.x_start = full.abscissa(start);
  seg.x_end = full.abscissa(start + length - 1);
  seg.values.assign(full.values.begin() + static_cast<std::ptrdiff_t>(start),
                    full.values.begin() + static_cast<std::ptrdiff_t>(start + length));
  return seg;
}

}  // namespace

TEST(Decimate, KeepsEveryNthSample) {
  const SampledSignal fine = generate(oracle::fig5_model(), 3);
  const SampledSignal coarse = decimate(fine, 4);
  const SampledSignal want = generate(oracle::fig5_model(), 2);
  ASSERT_EQ(coarse.size(), 17u);
  EXPECT_LE(max_abs_diff(coarse.values, want.values), 1e-12);
  SampledSignal seventeen;
  seventeen.values.assign(17, 0.0);
  EXPECT_EQ(decimate(seventeen, 4).size(), 5u);
  EXPECT_THROW(decimate(seventeen, 3), DomainError);
}

TEST(EstimationGrid, SmallestMultipleOfStrideCoveringMN) {
  EXPECT_EQ(estimation_grid_length(1025, 4), 4352u);  // P = 256, MN = 4100
  EXPECT_EQ(estimation_grid_length(17, 4), 68u);
  EXPECT_EQ(estimation_grid_length(126, 5), 650u);
}

TEST(EstimateQ, MatchesAnalyticFactor) {
  const FifModel model = oracle::fig5_model();
  const SampledSignal next = generate(model, 5);
  const SampledSignal prev = generate(model, 4);
  const QSamples s = estimate_q(next, prev, model.anchors, 4);
  EXPECT_EQ(s.stride, 256u);
  std::size_t checked = 0;
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    if (!s.valid[k]) continue;
    EXPECT_NEAR(std::abs(s.q[k] - q_discrete(model, 5, s.omega_hat[k])), 0.0, 1e-6) << k;
    ++checked;
  }
  EXPECT_GT(checked, s.grid_length / 2);
}

TEST(EstimateQ, ZeroScalingsGiveZeroFactor) {
  const FifModel model = derive_maps(oracle::fig5_model().anchors, {{0.0, 0.0, 0.0, 0.0}});
  const QSamples s = estimate_q(generate(model, 4), generate(model, 3), model.anchors, 4);
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    if (s.valid[k]) EXPECT_LE(std::abs(s.q[k]), 1e-9);
  }
}

TEST(EstimateQ, PeriodicityAndSymmetryOfTrueFif) {
  const FifModel model = oracle::fig5_model();
  const QSamples s = estimate_q(generate(model, 5), generate(model, 4), model.anchors, 4);
  const std::size_t b = s.bins_per_period();
  EXPECT_EQ((s.grid_length % b), 0u);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    const std::size_t j = (k + b) % s.grid_length;
    if (s.valid[k] && s.valid[j]) worst = std::max(worst, std::abs(s.q[k] - s.q[j]));
  }
  EXPECT_LE(worst, 1e-6);
  EXPECT_LE(periodicity_deviation(s), 1e-6);
  EXPECT_LE(symmetry_deviation(s), 1e-6);
}

TEST(EstimateQ, RequiresZeroEndpoints) {
  const FifModel model = oracle::fig5_model();
  SampledSignal next = generate(model, 3);
  next.values.back() = 0.1;
  EXPECT_THROW(estimate_q(next, generate(model, 2), model.anchors, 4), DomainError);
}

TEST(SolveD, RecoversSynthesizedSixAnchorScalings) {
  const FifModel model = oracle::fig7_model();
  const EstimationResult r = solve_d(synthetic_samples(model, 3), 5);
  EXPECT_LE(max_abs_diff(r.d_hat, model.scalings.d), 1e-10);
  EXPECT_LE(r.imaginary_norm, 1e-10);
  EXPECT_FALSE(r.ill_conditioned);
}

TEST(SolveD, ConstantFactorLoadsOnlyTheFirstScaling) {
  const FifModel model = oracle::fig5_model();
  QSamples s = synthetic_samples(model, 3);
  for (Complex& q : s.q) q = {0.35, 0.0};
  const EstimationResult r = solve_d(s, 4);
  EXPECT_NEAR(r.d_hat[0], 0.35, 1e-12);
  for (std::size_t p = 1; p < 4; ++p) EXPECT_NEAR(r.d_hat[p], 0.0, 1e-12);
}

TEST(SolveD, SurvivesExtraMaskedBins) {
  const FifModel model = oracle::fig7_model();
  QSamples s = synthetic_samples(model, 3);
  std::mt19937_64 rng(12);
  std::bernoulli_distribution drop(0.2);
  for (std::size_t k = 0; k < s.grid_length; ++k) {
    if (drop(rng)) s.valid[k] = false;
  }
  EXPECT_LE(max_abs_diff(solve_d(s, 5).d_hat, model.scalings.d), 1e-10);
}

TEST(SolveD, TooFewBinsIsUnderdetermined) {
  QSamples s = synthetic_samples(oracle::fig5_model(), 2);
  for (std::size_t k = 2; k < s.grid_length; ++k) s.valid[k] = false;
  EXPECT_THROW(solve_d(s, 4), UnderdeterminedError);
}

TEST(EstimateModel, NoiselessRoundTrip) {
  const FifModel model = oracle::fig5_model();
  const SampledSignal signal = generate(model, 5);
  const ModelEstimate est = estimate_model(signal, 4);
  EXPECT_LE(max_abs_diff(est.result.d_hat, model.scalings.d), 1e-6);
  EXPECT_LE(est.result.residual_norm, 1e-10);
  EXPECT_FALSE(est.clamped);
  EXPECT_LE(max_abs_diff(reconstruct(est.model, 5).values, signal.values), 1e-5);
}

TEST(EstimateModel, PureInterpolantGivesZeroScalings) {
  const FifModel model = derive_maps(oracle::fig7_model().anchors, {{0.0, 0.0, 0.0, 0.0, 0.0}});
  const SampledSignal signal = generate(model, 4);
  const ModelEstimate est = estimate_model(signal, 5);
  for (double d : est.result.d_hat) EXPECT_NEAR(d, 0.0, 1e-9);
  EXPECT_LE(max_abs_diff(reconstruct(est.model, 4).values, signal.values), 1e-12);
}

TEST(EstimateModel, WorksInAnyFrameAndScale) {
  const FifModel model = derive_maps({{{1.0, 2.0}, {2.0, 5.0}, {3.0, 3.0}, {4.0, -1.0}}}, {{0.45, -0.6, 0.3}});
  SampledSignal signal = reconstruct(model, 5);
  const ModelEstimate est = estimate_model(signal, 3);
  EXPECT_LE(max_abs_diff(est.result.d_hat, model.scalings.d), 1e-8);
  EXPECT_LE(max_abs_diff(reconstruct(est.model, 5).values, signal.values), 1e-8);

  for (double& v : signal.values) v *= -7.5;
  EXPECT_LE(max_abs_diff(estimate_model(signal, 3).result.d_hat, model.scalings.d), 1e-8);
}

TEST(EstimateModel, SuppliedAnchorsMustMatchOrder) {
  const SampledSignal signal = generate(oracle::fig5_model(), 4);
  EXPECT_THROW(estimate_model(signal, 4, oracle::fig7_model().anchors), DomainError);
  EXPECT_NO_THROW(estimate_model(signal, 4, oracle::fig5_model().anchors));
}

TEST(EstimateModel, ModerateNoiseStaysClose) {
  const FifModel model = oracle::fig5_model();
  const NoiseExperimentReport report = noise_experiment(model, 5, 20.0, 20);
  EXPECT_EQ(report.trials.size(), 20u);
  EXPECT_LE(report.median_max_abs_error, 0.1);
  const NoiseExperimentReport again = noise_experiment(model, 5, 20.0, 20);
  EXPECT_EQ(report.median_max_abs_error, again.median_max_abs_error);
}

TEST(AddWhiteNoise, HugeSnrLeavesSignalUntouched) {
  const SampledSignal s = generate(oracle::fig5_model(), 5);
  EXPECT_LE(max_abs_diff(add_white_noise(s, {300.0, 4}).values, s.values), 1e-12);
}

TEST(AddWhiteNoise, RealisedSnrAndDeterminism) {
  const SampledSignal s = generate(oracle::fig5_model(), 5);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const SampledSignal noisy = add_white_noise(s, {20.0, seed});
    double ps = 0.0, pn = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      ps += s.values[j] * s.values[j];
      pn += (noisy.values[j] - s.values[j]) * (noisy.values[j] - s.values[j]);
    }
    EXPECT_NEAR(10.0 * std::log10(ps / pn), 20.0, 0.5);
    EXPECT_EQ(add_white_noise(s, {20.0, seed}).values, noisy.values);
  }
  EXPECT_NE(add_white_noise(s, {20.0, 1}).values, add_white_noise(s, {20.0, 2}).values);
}

TEST(DetectOrder, FindsFourMapModel) {
  const OrderDetection d = detect_order(generate(oracle::fig5_model(), 4), 16);
  EXPECT_EQ(d.order, 4u);
  EXPECT_FALSE(d.window_effect);
}

TEST(DetectOrder, PrefersTwoOverItsSquare) {
  const FifModel model = derive_maps({{{0.0, 0.0}, {0.5, 0.8}, {1.0, 0.0}}}, {{0.6, -0.6}});
  const OrderDetection d = detect_order(generate(model, 8), 16);
  EXPECT_EQ(d.order, 2u);
  bool saw_four = false;
  for (const CandidateScore& c : d.candidates) {
    if (c.order == 4) {
      saw_four = true;
      EXPECT_TRUE(c.feasible);
    }
  }
  EXPECT_TRUE(saw_four);
}

TEST(DetectOrder, WindowedSegmentRaisesFlag) {
  const SampledSignal full = generate(oracle::fig5_model(), 5);
  const OrderDetection d = detect_order(segment_of(full, 100, 613), 16);
  EXPECT_TRUE(d.window_effect);
  for (const CandidateScore& c : d.candidates) {
    if (c.feasible) EXPECT_GT(c.periodicity, 0.05) << c.order;
  }
}

TEST(DetectOrder, RejectsSignalsWithoutCandidates) {
  SampledSignal s;
  s.values.assign(8, 1.0);  // 7 is prime and smaller than 7^2
  EXPECT_THROW(detect_order(s, 16), UndetectableOrderError);
}
