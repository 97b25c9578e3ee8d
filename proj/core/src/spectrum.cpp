#include "fifspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fifspec/errors.hpp"

namespace fifspec {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_canonical(const FifModel& model, const char* op) {
  if (!model.canonical) {
    throw UnsupportedFormError(std::string(op) + " requires a canonical, evenly spaced model; normalize it first");
  }
}

void require_increasing(std::span<const double> grid) {
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw DomainError("frequency grid must be strictly increasing (index " + std::to_string(k) + ")");
    }
  }
}

// phi_k(theta) = int_0^1 t^k exp(-i theta t) dt for k = 0, 1, small |theta|.
std::pair<Complex, Complex> ramp_moments(double theta) {
  Complex phi0{};
  Complex phi1{};
  Complex power{1.0, 0.0};  // (-i theta)^j / j!
  for (int j = 0; j < 60; ++j) {
    phi0 += power / static_cast<double>(j + 1);
    phi1 += power / static_cast<double>(j + 2);
    power *= Complex{0.0, -theta} / static_cast<double>(j + 1);
    if (std::abs(power) < 1e-20) break;
  }
  return {phi0, phi1};
}

double reduce_angle(double theta) { return std::remainder(theta, 2.0 * std::numbers::pi); }

// S0 = sum_{i<P} z^i and S1 = sum_{i<P} i z^i with z = exp(-i theta).
std::pair<Complex, Complex> ramp_sums(std::size_t count, double theta) {
  const double t = reduce_angle(theta);
  const double p = static_cast<double>(count);
  if (std::abs(t) * p < 1.0) {
    Complex s0{};
    Complex s1{};
    for (std::size_t i = 0; i < count; ++i) {
      const Complex z = std::polar(1.0, -t * static_cast<double>(i));
      s0 += z;
      s1 += static_cast<double>(i) * z;
    }
    return {s0, s1};
  }
  // Dirichlet-kernel form: S0 = exp(-i t (P-1)/2) D(t), D = sin(P t/2) / sin(t/2).
  const double half = 0.5 * t;
  const double sh = std::sin(half);
  const double ch = std::cos(half);
  const double sp = std::sin(p * half);
  const double cp = std::cos(p * half);
  const double dirichlet = sp / sh;
  const double slope = (0.5 * p * cp * sh - 0.5 * sp * ch) / (sh * sh);
  const Complex phase = std::polar(1.0, -t * 0.5 * (p - 1.0));
  return {phase * dirichlet, phase * (0.5 * (p - 1.0) * dirichlet + kI * slope)};
}

}  // namespace

const char* to_string(SpectrumKind kind) noexcept {
  switch (kind) {
    case SpectrumKind::kContinuousAnalytic:
      return "continuous-analytic";
    case SpectrumKind::kDtftIterative:
      return "dtft-iterative";
    case SpectrumKind::kDftOfSignal:
      return "dft-of-signal";
  }
  return "unknown";
}

Complex q_continuous(const FifModel& model, double omega) {
  require_canonical(model, "q_continuous");
  const std::size_t n = model.order();
  const double inv_n = 1.0 / static_cast<double>(n);
  Complex acc{};
  for (std::size_t p = 0; p < n; ++p) {
    acc += model.scalings.d[p] * std::polar(1.0, -omega * static_cast<double>(p) * inv_n);
  }
  return acc * inv_n;
}

Complex g_hat(const FifModel& model, double omega) {
  require_canonical(model, "g_hat");
  const std::size_t n = model.order();
  const double order = static_cast<double>(n);
  const auto& pts = model.anchors.points;

  if (std::abs(omega) < kSmallOmega) {
    const double h = 1.0 / order;
    const auto [phi0, phi1] = ramp_moments(omega * h);
    Complex acc{};
    for (std::size_t k = 1; k <= n; ++k) {
      const double x0 = static_cast<double>(k - 1) / order;
      const double base = pts[k - 1].y;
      const double rise = pts[k].y - pts[k - 1].y;
      acc += h * std::polar(1.0, -omega * x0) * (base * phi0 + rise * phi1);
    }
    return acc;
  }

  const Complex iw = kI * omega;
  Complex acc{};
  for (std::size_t k = 1; k <= n; ++k) {
    const AffineMapParams& w = model.maps[k - 1];
    const double x0 = static_cast<double>(k - 1) / order;
    const double x1 = static_cast<double>(k) / order;
    const Complex e0 = std::polar(1.0, -omega * x0);
    const Complex e1 = std::polar(1.0, -omega * x1);
    const double slope = w.c / w.a;
    acc += (e0 - e1) / (iw * iw) * (slope + iw * (w.f - w.c * w.e / w.a)) + slope * (x0 * e0 - x1 * e1) / iw;
  }
  return acc;
}

TransformValue fif_transform(const FifModel& model, double omega, double tolerance) {
  require_canonical(model, "fif_transform");
  if (!(tolerance > 0.0)) throw DomainError("truncation tolerance must be > 0");
  const double a = 1.0 / static_cast<double>(model.order());
  TransformValue out;
  Complex product{1.0, 0.0};
  double sup_g = 0.0;
  double arg = omega;
  for (int i = 0; i < kMaxProductTerms; ++i) {
    const Complex g = g_hat(model, arg);
    sup_g = std::max(sup_g, std::abs(g));
    out.value += g * product;
    out.terms = i + 1;
    product *= q_continuous(model, arg);
    arg *= a;
    if (std::abs(product) < tolerance) break;
  }
  out.error_bound = std::abs(product) * sup_g;
  return out;
}

Spectrum spectrum_continuous(const FifModel& model, std::span<const double> omegas, double tolerance) {
  require_canonical(model, "spectrum_continuous");
  require_increasing(omegas);
  Spectrum out;
  out.kind = SpectrumKind::kContinuousAnalytic;
  out.frequencies.assign(omegas.begin(), omegas.end());
  out.values.reserve(omegas.size());
  for (double w : omegas) out.values.push_back(fif_transform(model, w, tolerance).value);
  return out;
}

Complex q_discrete(const FifModel& model, int iterations, double omega_hat) {
  require_canonical(model, "q_discrete");
  if (iterations < 1) throw DomainError("q_discrete needs m >= 1 so that N divides M - 1");
  const std::size_t n = model.order();
  const std::size_t stride = sample_count(n, iterations - 1);
  if (stride == 0) throw ResourceError("q_discrete: N^(m-1) overflows");
  const double t = reduce_angle(omega_hat);
  const double step = static_cast<double>(stride - 1);  // (M - 1) / N
  Complex acc{};
  for (std::size_t p = 0; p < n; ++p) {
    acc += model.scalings.d[p] * std::polar(1.0, -reduce_angle(t * static_cast<double>(p) * step));
  }
  return acc;
}

Complex interpolant_dtft(const InterpolationSet& anchors, std::size_t stride, double omega_hat) {
  const std::size_t n = anchors.order();
  if (stride == 0) throw DomainError("interpolant_dtft needs stride >= 1");
  const auto& pts = anchors.points;
  const double t = reduce_angle(omega_hat);
  const auto [s0, s1] = ramp_sums(stride, t);
  const double inv_stride = 1.0 / static_cast<double>(stride);
  Complex acc{};
  for (std::size_t k = 0; k < n; ++k) {
    const Complex shift = std::polar(1.0, -reduce_angle(t * static_cast<double>(k * stride)));
    acc += shift * (pts[k].y * s0 + (pts[k + 1].y - pts[k].y) * inv_stride * s1);
  }
  acc += pts[n].y * std::polar(1.0, -reduce_angle(t * static_cast<double>(n * stride)));
  return acc;
}

Spectrum dtft_iterative(const FifModel& model, int iterations, std::span<const double> grid) {
  require_canonical(model, "dtft_iterative");
  if (iterations < 1) throw DomainError("dtft_iterative needs m >= 1");
  require_increasing(grid);
  const std::size_t n = model.order();
  if (sample_count(n, iterations) == 0) throw ResourceError("dtft_iterative: N^m overflows");

  Spectrum out;
  out.kind = SpectrumKind::kDtftIterative;
  out.frequencies.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double w = grid[g];
    Complex value = interpolant_dtft(model.anchors, 1, w);
    std::size_t stride = 1;
    for (int j = 2; j <= iterations; ++j) {
      stride *= n;
      value = q_discrete(model, j, w) * value + interpolant_dtft(model.anchors, stride, w);
    }
    out.values[g] = value;
  }
  return out;
}

std::vector<double> dft_grid(std::size_t length) {
  std::vector<double> grid(length);
  for (std::size_t k = 0; k < length; ++k) {
    grid[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(length);
  }
  return grid;
}

Spectrum dft_of_signal(const SampledSignal& signal, std::size_t pad_factor) {
  if (pad_factor < 1) throw DomainError("pad factor must be >= 1");
  if (signal.size() == 0) throw DomainError("dft_of_signal: empty signal");
  const std::size_t length = signal.size() * pad_factor;
  Spectrum out;
  out.kind = SpectrumKind::kDftOfSignal;
  out.values = dft(zero_pad(signal.values, length));
  out.frequencies = dft_grid(length);
  return out;
}

}  // namespace fifspec
