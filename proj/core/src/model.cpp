#include "fifspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fifspec/errors.hpp"

namespace fifspec {

namespace {

std::string at(std::size_t index) { return " (index " + std::to_string(index) + ")"; }

bool near(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) <= kEndpointTolerance * std::max(1.0, scale);
}

double magnitude_scale(const InterpolationSet& anchors) {
  double scale = 0.0;
  for (const Point& p : anchors.points) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  return scale;
}

bool evenly_spaced(const InterpolationSet& anchors) {
  const std::size_t n = anchors.order();
  const double span = anchors.back().x - anchors.front().x;
  const double step = span / static_cast<double>(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double gap = anchors.points[k].x - anchors.points[k - 1].x;
    if (std::abs(gap - step) >= 1e-12 * std::abs(span)) return false;
  }
  return true;
}

AffineMapParams general_map(const InterpolationSet& anchors, std::size_t n, double d) {
  const Point& first = anchors.front();
  const Point& last = anchors.back();
  const Point& lo = anchors.points[n - 1];
  const Point& hi = anchors.points[n];
  const double width = last.x - first.x;
  AffineMapParams w;
  w.a = (hi.x - lo.x) / width;
  w.e = (last.x * lo.x - first.x * hi.x) / width;
  w.c = (hi.y - lo.y) / width - d * (last.y - first.y) / width;
  w.f = (last.x * lo.y - first.x * hi.y) / width - d * (last.x * first.y - first.x * last.y) / width;
  w.d = d;
  return w;
}

AffineMapParams canonical_map(const InterpolationSet& anchors, std::size_t n, double d) {
  const double order = static_cast<double>(anchors.order());
  AffineMapParams w;
  w.a = 1.0 / order;
  w.e = static_cast<double>(n - 1) / order;
  w.c = anchors.points[n].y - anchors.points[n - 1].y;
  w.f = anchors.points[n - 1].y;
  w.d = d;
  return w;
}

void check_endpoint_conditions(const FifModel& model, ValidationReport& report) {
  const InterpolationSet& anchors = model.anchors;
  const double scale = magnitude_scale(anchors);
  for (std::size_t n = 1; n <= model.maps.size() && n < anchors.points.size(); ++n) {
    const AffineMapParams& w = model.maps[n - 1];
    const Point left = w.apply(anchors.front());
    const Point right = w.apply(anchors.back());
    const Point& lo = anchors.points[n - 1];
    const Point& hi = anchors.points[n];
    if (!near(left.x, lo.x, scale) || !near(left.y, lo.y, scale) || !near(right.x, hi.x, scale) ||
        !near(right.y, hi.y, scale)) {
      report.violations.push_back({Violation::Kind::kEndpointCondition, n - 1,
                                   "map does not carry the end anchors onto its interval" + at(n - 1)});
    }
  }
}

void check_raw(const InterpolationSet& anchors, const VerticalScalings& scalings, ValidationReport& report) {
  if (anchors.points.size() < 3) {
    report.violations.push_back({Violation::Kind::kTooFewPoints, anchors.points.size(),
                                 "need at least 3 interpolation points"});
  }
  for (std::size_t k = 1; k < anchors.points.size(); ++k) {
    if (!(anchors.points[k].x > anchors.points[k - 1].x)) {
      report.violations.push_back(
          {Violation::Kind::kOrdering, k, "abscissas must be strictly increasing" + at(k)});
    }
  }
  if (scalings.size() != anchors.order()) {
    report.violations.push_back({Violation::Kind::kCountMismatch, scalings.size(),
                                 "expected " + std::to_string(anchors.order()) + " scaling factors, got " +
                                     std::to_string(scalings.size())});
  }
  for (std::size_t k = 0; k < scalings.size(); ++k) {
    if (!(std::abs(scalings.d[k]) < 1.0)) {
      report.violations.push_back(
          {Violation::Kind::kContractivity, k, "|d| must be < 1" + at(k)});
    }
  }
}

}  // namespace

void InterpolationSet::check() const {
  if (points.size() < 3) throw DomainError("interpolation set needs at least 3 points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k].x) || !std::isfinite(points[k].y)) {
      throw DomainError("non-finite interpolation point" + at(k));
    }
    if (k > 0 && !(points[k].x > points[k - 1].x)) {
      throw DomainError("abscissas must be strictly increasing" + at(k));
    }
  }
}

void VerticalScalings::check() const {
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!(std::abs(d[k]) < 1.0)) throw ContractivityError("vertical scaling |d| must be < 1" + at(k));
  }
}

Point AuxTransform::invert(Point p) const {
  if (a == 0.0) throw DomainError("aux transform is not invertible (a_aux = 0)");
  const AffineMapParams inv = inverse_map();
  return inv.apply(p);
}

AffineMapParams AuxTransform::inverse_map() const {
  if (a == 0.0) throw DomainError("aux transform is not invertible (a_aux = 0)");
  return {1.0 / a, -c / a, 1.0, -e / a, c * e / a - f};
}

AffineMapParams compose(const AffineMapParams& lhs, const AffineMapParams& rhs) noexcept {
  // lhs(rhs(x, y))
  AffineMapParams out;
  out.a = lhs.a * rhs.a;
  out.e = lhs.a * rhs.e + lhs.e;
  out.c = lhs.c * rhs.a + lhs.d * rhs.c;
  out.d = lhs.d * rhs.d;
  out.f = lhs.c * rhs.e + lhs.d * rhs.f + lhs.f;
  return out;
}

bool is_canonical(const InterpolationSet& anchors) {
  if (anchors.points.size() < 2) return false;
  const double scale = magnitude_scale(anchors);
  return near(anchors.front().x, 0.0, 1.0) && near(anchors.back().x, 1.0, 1.0) &&
         near(anchors.front().y, 0.0, scale) && near(anchors.back().y, 0.0, scale) && evenly_spaced(anchors);
}

FifModel derive_maps(const InterpolationSet& anchors, const VerticalScalings& scalings) {
  anchors.check();
  scalings.check();
  if (scalings.size() != anchors.order()) {
    throw DomainError("expected " + std::to_string(anchors.order()) + " scaling factors, got " +
                      std::to_string(scalings.size()));
  }
  FifModel model;
  model.anchors = anchors;
  model.scalings = scalings;
  model.canonical = is_canonical(anchors);
  model.maps.reserve(anchors.order());
  for (std::size_t n = 1; n <= anchors.order(); ++n) {
    const double d = scalings.d[n - 1];
    model.maps.push_back(model.canonical ? canonical_map(anchors, n, d) : general_map(anchors, n, d));
  }
  return model;
}

Normalized normalize(const FifModel& model) {
  const InterpolationSet& anchors = model.anchors;
  if (anchors.points.size() < 2) throw DomainError("model has no anchors");
  const Point first = anchors.front();
  const Point last = anchors.back();
  const double width = last.x - first.x;
  if (!(width != 0.0) || !std::isfinite(width)) throw DomainError("degenerate x-range (x_N = x_0)");

  AuxTransform aux;
  const double slope = (last.y - first.y) / width;
  aux.a = 1.0 / width;
  aux.e = -first.x / width;
  aux.c = -slope;
  aux.f = slope * first.x - first.y;
  if (first.x == 0.0 && last.x == 1.0 && first.y == 0.0 && last.y == 0.0) aux = AuxTransform{};
  if (aux.is_identity()) return {model, aux};

  FifModel out;
  out.scalings = model.scalings;
  out.anchors.points.reserve(anchors.points.size());
  for (const Point& p : anchors.points) out.anchors.points.push_back(aux.apply(p));
  out.anchors.points.front() = {0.0, 0.0};
  out.anchors.points.back() = {1.0, 0.0};

  const AffineMapParams forward = aux.as_map();
  const AffineMapParams backward = aux.inverse_map();
  out.maps.reserve(model.maps.size());
  for (const AffineMapParams& w : model.maps) {
    AffineMapParams conj = compose(forward, compose(w, backward));
    conj.a = w.a;
    conj.d = w.d;
    out.maps.push_back(conj);
  }
  out.canonical = is_canonical(out.anchors);
  return {std::move(out), aux};
}

FifModel denormalize(const FifModel& model, const AuxTransform& aux) {
  if (aux.a == 0.0) throw DomainError("aux transform is not invertible (a_aux = 0)");
  if (aux.is_identity()) return model;

  FifModel out;
  out.scalings = model.scalings;
  out.anchors.points.reserve(model.anchors.points.size());
  for (const Point& p : model.anchors.points) out.anchors.points.push_back(aux.invert(p));

  const AffineMapParams forward = aux.as_map();
  const AffineMapParams backward = aux.inverse_map();
  out.maps.reserve(model.maps.size());
  for (const AffineMapParams& w : model.maps) {
    AffineMapParams conj = compose(backward, compose(w, forward));
    conj.a = w.a;
    conj.d = w.d;
    out.maps.push_back(conj);
  }
  out.canonical = is_canonical(out.anchors);
  return out;
}

bool ValidationReport::has(Violation::Kind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const InterpolationSet& anchors, const VerticalScalings& scalings) {
  ValidationReport report;
  check_raw(anchors, scalings, report);
  if (report.ok()) check_endpoint_conditions(derive_maps(anchors, scalings), report);
  return report;
}

ValidationReport validate(const FifModel& model) {
  ValidationReport report;
  check_raw(model.anchors, model.scalings, report);
  if (model.maps.size() != model.anchors.order()) {
    report.violations.push_back({Violation::Kind::kCountMismatch, model.maps.size(),
                                 "map count does not match the number of intervals"});
  }
  for (std::size_t k = 0; k < model.maps.size(); ++k) {
    const double a = model.maps[k].a;
    if (!(a > 0.0 && a < 1.0)) {
      report.violations.push_back(
          {Violation::Kind::kHorizontalContraction, k, "map must satisfy 0 < a < 1" + at(k)});
    }
    if (!(std::abs(model.maps[k].d) < 1.0) && !report.has(Violation::Kind::kContractivity)) {
      report.violations.push_back({Violation::Kind::kContractivity, k, "map has |d| >= 1" + at(k)});
    }
  }
  if (!report.has(Violation::Kind::kTooFewPoints) && !report.has(Violation::Kind::kOrdering)) {
    check_endpoint_conditions(model, report);
  }
  return report;
}

}  // namespace fifspec
