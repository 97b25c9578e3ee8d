#include "fifspec/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fifspec/errors.hpp"

namespace fifspec {

namespace {

bool evenly_spaced(const InterpolationSet& anchors) {
  const std::size_t n = anchors.order();
  const double span = anchors.back().x - anchors.front().x;
  const double step = span / static_cast<double>(n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (std::abs(anchors.points[k].x - anchors.points[k - 1].x - step) >= 1e-12 * std::abs(span)) return false;
  }
  return true;
}

double lerp(double lo, double hi, double t) { return lo + (hi - lo) * t; }

}  // namespace

std::size_t sample_count(std::size_t order, int iterations) noexcept {
  if (iterations < 0) return 0;
  std::size_t count = 1;
  for (int i = 0; i < iterations; ++i) {
    if (count > (std::numeric_limits<std::size_t>::max() - 1) / order) return 0;
    count *= order;
  }
  return count + 1;
}

SampledSignal linear_interpolant(const InterpolationSet& anchors, std::size_t grid_size) {
  anchors.check();
  if (grid_size < 2) throw DomainError("linear_interpolant needs grid_size >= 2");

  SampledSignal out;
  out.order = anchors.order();
  out.x_start = anchors.front().x;
  out.x_end = anchors.back().x;
  out.values.resize(grid_size);
  const auto& pts = anchors.points;
  const std::size_t intervals = grid_size - 1;

  if (evenly_spaced(anchors)) {
    // Index arithmetic keeps anchor hits exact.
    const std::size_t n = anchors.order();
    for (std::size_t j = 0; j < grid_size; ++j) {
      const std::size_t u = j * n;
      const std::size_t seg = std::min(u / intervals, n - 1);
      const std::size_t rem = u - seg * intervals;
      out.values[j] = rem == 0 ? pts[seg].y
                               : lerp(pts[seg].y, pts[seg + 1].y,
                                      static_cast<double>(rem) / static_cast<double>(intervals));
    }
    return out;
  }

  std::size_t seg = 0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double x = out.abscissa(j);
    while (seg + 2 < pts.size() && x >= pts[seg + 1].x) ++seg;
    if (x == pts[seg].x) {
      out.values[j] = pts[seg].y;
    } else if (x == pts[seg + 1].x) {
      out.values[j] = pts[seg + 1].y;
    } else {
      out.values[j] = lerp(pts[seg].y, pts[seg + 1].y, (x - pts[seg].x) / (pts[seg + 1].x - pts[seg].x));
    }
  }
  return out;
}

SampledSignal iterate(const FifModel& model, const SampledSignal& signal) {
  if (!model.canonical) throw UnsupportedFormError("iterate requires a canonical model; normalize it first");
  const std::size_t n = model.order();
  if (signal.order != n) {
    throw DomainError("signal order " + std::to_string(signal.order) + " does not match model order " +
                      std::to_string(n));
  }
  if (signal.size() < 2) throw DomainError("signal needs at least 2 samples");
  const double y0 = model.anchors.front().y;
  const double yn = model.anchors.back().y;
  if (std::abs(signal.values.front() - y0) > kEndpointTolerance ||
      std::abs(signal.values.back() - yn) > kEndpointTolerance) {
    throw DomainError("signal endpoints do not match the anchor endpoints");
  }

  const std::size_t stride = signal.size() - 1;
  if (stride > (std::numeric_limits<std::size_t>::max() - 1) / n) throw ResourceError("iterate: length overflow");

  SampledSignal out;
  out.order = n;
  out.iteration = signal.iteration + 1;
  out.x_start = signal.x_start;
  out.x_end = signal.x_end;
  out.values.resize(n * stride + 1);
  const double denom = static_cast<double>(stride);
  for (std::size_t k = 0; k < n; ++k) {
    const AffineMapParams& w = model.maps[k];
    const std::size_t base = k * stride;
    // The last subinterval also writes the closing sample.
    const std::size_t count = k + 1 == n ? stride + 1 : stride;
    for (std::size_t i = 0; i < count; ++i) {
      const double pre_x = static_cast<double>(i) / denom;
      out.values[base + i] = w.c * pre_x + w.d * signal.values[i] + w.f;
    }
  }
  return out;
}

SampledSignal generate(const FifModel& model, int iterations, std::size_t sample_budget) {
  if (!model.canonical) throw UnsupportedFormError("generate requires a canonical model; normalize it first");
  if (iterations < 0) throw DomainError("iteration count must be >= 0");
  const std::size_t n = model.order();
  const std::size_t samples = sample_count(n, iterations);
  if (samples == 0 || samples > sample_budget) {
    throw ResourceError("N^m + 1 = " + (samples == 0 ? std::string("overflow") : std::to_string(samples)) +
                        " samples exceeds the budget of " + std::to_string(sample_budget));
  }

  SampledSignal signal;
  signal.order = n;
  signal.iteration = 0;
  signal.x_start = model.anchors.front().x;
  signal.x_end = model.anchors.back().x;
  signal.values = {model.anchors.front().y, model.anchors.back().y};
  for (int m = 0; m < iterations; ++m) signal = iterate(model, signal);
  return signal;
}

SampledSignal transform_signal(const SampledSignal& signal, const AuxTransform& aux) {
  if (!(aux.a > 0.0)) throw DomainError("aux transform must preserve orientation (a_aux > 0)");
  SampledSignal out = signal;
  out.x_start = aux.a * signal.x_start + aux.e;
  out.x_end = aux.a * signal.x_end + aux.e;
  for (std::size_t j = 0; j < signal.size(); ++j) {
    out.values[j] = aux.c * signal.abscissa(j) + signal.values[j] + aux.f;
  }
  return out;
}

SampledSignal untransform_signal(const SampledSignal& signal, const AuxTransform& aux) {
  if (!(aux.a > 0.0)) throw DomainError("aux transform must preserve orientation (a_aux > 0)");
  const AffineMapParams inv = aux.inverse_map();
  SampledSignal out = signal;
  out.x_start = inv.a * signal.x_start + inv.e;
  out.x_end = inv.a * signal.x_end + inv.e;
  for (std::size_t j = 0; j < signal.size(); ++j) {
    out.values[j] = inv.c * signal.abscissa(j) + signal.values[j] + inv.f;
  }
  return out;
}

}  // namespace fifspec
