#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fifspec/generate.hpp"
#include "fifspec/model.hpp"
#include "fifspec/numerics.hpp"

namespace fifspec {

enum class SpectrumKind { kContinuousAnalytic, kDtftIterative, kDftOfSignal };

const char* to_string(SpectrumKind kind) noexcept;

// Frequencies are radians: continuous omega for kContinuousAnalytic,
// normalised omega-hat (per sample) otherwise. Strictly increasing.
struct Spectrum {
  std::vector<double> frequencies;
  ComplexSequence values;
  SpectrumKind kind = SpectrumKind::kContinuousAnalytic;

  std::size_t size() const noexcept { return values.size(); }
};

inline constexpr double kDefaultTruncationTolerance = 1e-12;
inline constexpr int kMaxProductTerms = 200;

// Q(w) = (1/N) sum_n d_n exp(-i w (n-1)/N); period 2 pi N, |Q| <= max|d|.
Complex q_continuous(const FifModel& model, double omega);

// Fourier transform of the piecewise-linear interpolant over [0, 1].
// Uses the closed form for |omega| >= kSmallOmega and a convergent
// per-segment power series below it, where the closed form cancels.
Complex g_hat(const FifModel& model, double omega);
inline constexpr double kSmallOmega = 1.0;

struct TransformValue {
  Complex value;
  // Final |prod Q| times the largest |G| seen among the evaluated terms.
  double error_bound = 0.0;
  int terms = 0;
};

// F(w) = sum_i G(w a^i) prod_{j<i} Q(w a^j), stopped once the running
// product drops below tolerance or after kMaxProductTerms terms.
TransformValue fif_transform(const FifModel& model, double omega, double tolerance = kDefaultTruncationTolerance);

Spectrum spectrum_continuous(const FifModel& model, std::span<const double> omegas,
                             double tolerance = kDefaultTruncationTolerance);

// q_m(w^) = sum_p d_p exp(-i w^ (p-1) (M-1)/N) with M = N^m + 1. Carries no
// 1/N prefactor: with the plain (unweighted) DTFT this is the exact factor
// linking f_m to f_{m-1}. Relation to the continuous factor:
// q_m(w^) = N * Q(w^ (M-1)).
Complex q_discrete(const FifModel& model, int iterations, double omega_hat);

// DTFT of generate(model, m) evaluated on an arbitrary grid through
// f_j = q_j f_{j-1} + g_j, starting from the anchor DTFT. g_j is the
// DTFT of the linear interpolant sampled on the N^j + 1 grid.
Spectrum dtft_iterative(const FifModel& model, int iterations, std::span<const double> grid);

// DTFT of the linear interpolant through the anchors sampled on an
// (N P + 1)-point grid, at one frequency. Closed-form ramp sums.
Complex interpolant_dtft(const InterpolationSet& anchors, std::size_t stride, double omega_hat);

// Zero-pads to pad_factor * size and returns the DFT on w^_k = 2 pi k / L.
Spectrum dft_of_signal(const SampledSignal& signal, std::size_t pad_factor);

// 2 pi k / length for k = 0 .. length-1.
std::vector<double> dft_grid(std::size_t length);

}  // namespace fifspec
