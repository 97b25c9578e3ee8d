#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fifspec {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// The N+1 anchors an FIF passes through. Invariants (checked by check() and
// by derive_maps): strictly increasing abscissas, at least three points.
struct InterpolationSet {
  std::vector<Point> points;

  std::size_t order() const noexcept { return points.empty() ? 0 : points.size() - 1; }
  const Point& front() const { return points.front(); }
  const Point& back() const { return points.back(); }

  // Throws DomainError naming the first offending index.
  void check() const;
};

// One vertical scaling factor per map, |d_n| < 1.
struct VerticalScalings {
  std::vector<double> d;

  std::size_t size() const noexcept { return d.size(); }

  // Throws ContractivityError naming the first offending index.
  void check() const;
};

// w(x, y) = (a x + e, c x + d y + f)
struct AffineMapParams {
  double a = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;

  Point apply(Point p) const noexcept { return {a * p.x + e, c * p.x + d * p.y + f}; }
};

struct FifModel {
  InterpolationSet anchors;
  VerticalScalings scalings;
  std::vector<AffineMapParams> maps;
  bool canonical = false;

  std::size_t order() const noexcept { return maps.size(); }
};

// x' = a x + e,  y' = c x + d y + f  with d fixed to 1.
struct AuxTransform {
  double a = 1.0;
  double c = 0.0;
  double e = 0.0;
  double f = 0.0;

  bool is_identity() const noexcept { return a == 1.0 && c == 0.0 && e == 0.0 && f == 0.0; }
  Point apply(Point p) const noexcept { return {a * p.x + e, c * p.x + p.y + f}; }
  // Throws DomainError when a == 0.
  Point invert(Point p) const;
  AffineMapParams as_map() const noexcept { return {a, c, 1.0, e, f}; }
  AffineMapParams inverse_map() const;
};

// Builds the N maps from the interpolation conditions w_n(x_0,y_0) = (x_{n-1},y_{n-1}),
// w_n(x_N,y_N) = (x_n,y_n) with d_n free.
FifModel derive_maps(const InterpolationSet& anchors, const VerticalScalings& scalings);

// True when x_0 = 0, x_N = 1, y_0 = y_N = 0 and the spacing is even, all within 1e-12.
bool is_canonical(const InterpolationSet& anchors);

struct Normalized {
  FifModel model;
  AuxTransform aux;
};

// Maps the model onto [0,1] with zero endpoints by conjugating every map
// with w_aux. a_n and d_n are untouched.
Normalized normalize(const FifModel& model);

FifModel denormalize(const FifModel& model, const AuxTransform& aux);

// Composition helpers for conjugation: lhs after rhs.
AffineMapParams compose(const AffineMapParams& lhs, const AffineMapParams& rhs) noexcept;

struct Violation {
  enum class Kind { kTooFewPoints, kOrdering, kCountMismatch, kHorizontalContraction, kContractivity, kEndpointCondition };
  Kind kind;
  std::size_t index;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const noexcept;
};

// Never throws; collects every violation it finds.
ValidationReport validate(const FifModel& model);

// Same checks for raw data that has not gone through derive_maps.
ValidationReport validate(const InterpolationSet& anchors, const VerticalScalings& scalings);

inline constexpr double kEndpointTolerance = 1e-12;

}  // namespace fifspec
