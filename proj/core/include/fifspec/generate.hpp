#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fifspec/model.hpp"

namespace fifspec {

// A uniformly sampled instance of a discrete FIF. Sample j sits at
// x_start + j * (x_end - x_start) / (size - 1).
struct SampledSignal {
  std::vector<double> values;
  int iteration = 0;
  std::size_t order = 0;
  double x_start = 0.0;
  double x_end = 1.0;

  std::size_t size() const noexcept { return values.size(); }
  double abscissa(std::size_t j) const noexcept {
    return x_start + static_cast<double>(j) * (x_end - x_start) / static_cast<double>(values.size() - 1);
  }
};

inline constexpr std::size_t kDefaultSampleBudget = std::size_t{1} << 22;

// N^m + 1, or 0 when that overflows std::size_t.
std::size_t sample_count(std::size_t order, int iterations) noexcept;

// G(x) on grid_size uniform points over [x_0, x_N].
SampledSignal linear_interpolant(const InterpolationSet& anchors, std::size_t grid_size);

// One application of the discrete Barnsley operator on the uniform grid.
// Input length P+1 produces output length N*P+1; output sample j in
// subinterval k reads input sample j - (k-1) P.
SampledSignal iterate(const FifModel& model, const SampledSignal& signal);

// m-fold iteration from the two-endpoint initiator, so generate(model, 1)
// is the anchor set and the result always has N^m + 1 samples.
SampledSignal generate(const FifModel& model, int iterations, std::size_t sample_budget = kDefaultSampleBudget);

// Applies an aux transform (or its inverse) to every sample point of a signal.
SampledSignal transform_signal(const SampledSignal& signal, const AuxTransform& aux);
SampledSignal untransform_signal(const SampledSignal& signal, const AuxTransform& aux);

}  // namespace fifspec
