#include <gtest/gtest.h>

#include <random>

#include "fifspec/errors.hpp"
#include "fifspec/model.hpp"
#include "oracles.hpp"

using namespace fifspec;

namespace {

void expect_map_near(const AffineMapParams& got, const AffineMapParams& want, double tol) {
  EXPECT_NEAR(got.a, want.a, tol);
  EXPECT_NEAR(got.c, want.c, tol);
  EXPECT_NEAR(got.d, want.d, tol);
  EXPECT_NEAR(got.e, want.e, tol);
  EXPECT_NEAR(got.f, want.f, tol);
}

InterpolationSet skewed_anchors() { return {{{1.0, 2.0}, {2.0, 5.0}, {4.0, 3.0}}}; }

}  // namespace

TEST(DeriveMaps, CanonicalHorizontalParameters) {
  const FifModel model = oracle::fig5_model();
  ASSERT_TRUE(model.canonical);
  ASSERT_EQ(model.order(), 4u);
  const double e[] = {0.0, 0.25, 0.5, 0.75};
  for (std::size_t n = 0; n < 4; ++n) {
    EXPECT_EQ(model.maps[n].a, 0.25);
    EXPECT_EQ(model.maps[n].e, e[n]);
  }
}

TEST(DeriveMaps, CanonicalVerticalParametersIndependentOfD) {
  const double c[] = {1.0, 0.4, -1.9, 0.5};
  const double f[] = {0.0, 1.0, 1.4, -0.5};
  for (const std::vector<double>& d : {std::vector<double>{0.3, -0.4, 0.5, 0.2}, std::vector<double>{0, 0, 0, 0},
                                       std::vector<double>{-0.9, 0.9, -0.1, 0.7}}) {
    const FifModel model = derive_maps(oracle::fig5_model().anchors, {d});
    for (std::size_t n = 0; n < 4; ++n) {
      EXPECT_NEAR(model.maps[n].c, c[n], 1e-15);
      EXPECT_EQ(model.maps[n].f, f[n]);
      EXPECT_EQ(model.maps[n].d, d[n]);
    }
  }
}

TEST(DeriveMaps, ClosedFormsAgreeWithGeneralFormulas) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const FifModel model = oracle::random_canonical_model(rng, 2 + trial % 5);
    const auto want = oracle::general_maps(model.anchors, model.scalings.d);
    for (std::size_t n = 0; n < model.order(); ++n) expect_map_near(model.maps[n], want[n], 1e-14);
  }
}

TEST(DeriveMaps, GeneralAnchorsSatisfyInterpolationConditions) {
  const InterpolationSet anchors = skewed_anchors();
  const FifModel model = derive_maps(anchors, {{0.5, 0.5}});
  EXPECT_FALSE(model.canonical);
  const auto want = oracle::general_maps(anchors, {0.5, 0.5});
  for (std::size_t n = 0; n < 2; ++n) expect_map_near(model.maps[n], want[n], 1e-14);

  const Point first = anchors.front(), last = anchors.back();
  auto expect_point = [](Point got, Point want) {
    EXPECT_NEAR(got.x, want.x, 1e-12);
    EXPECT_NEAR(got.y, want.y, 1e-12);
  };
  expect_point(model.maps[0].apply(first), {1.0, 2.0});
  expect_point(model.maps[0].apply(last), {2.0, 5.0});
  expect_point(model.maps[1].apply(first), {2.0, 5.0});
  expect_point(model.maps[1].apply(last), {4.0, 3.0});
}

TEST(DeriveMaps, RejectsInvalidInput) {
  EXPECT_THROW(derive_maps(oracle::fig5_model().anchors, {{1.0, 0.0, 0.0, 0.0}}), ContractivityError);
  EXPECT_THROW(derive_maps(oracle::fig5_model().anchors, {{0.1, 0.2}}), DomainError);
  EXPECT_THROW(derive_maps({{{0.0, 0.0}, {1.0, 0.0}}}, {{0.1}}), DomainError);
  EXPECT_THROW(derive_maps({{{0.0, 0.0}, {0.5, 1.0}, {0.5, 2.0}, {1.0, 0.0}}}, {{0.1, 0.1, 0.1}}), DomainError);
}

TEST(IsCanonical, DetectsFrameAndSpacing) {
  EXPECT_TRUE(is_canonical(oracle::fig5_model().anchors));
  EXPECT_FALSE(is_canonical(skewed_anchors()));
  EXPECT_FALSE(is_canonical({{{0.0, 0.0}, {0.3, 1.0}, {1.0, 0.0}}}));
  EXPECT_FALSE(is_canonical({{{0.0, 0.1}, {0.5, 1.0}, {1.0, 0.0}}}));
}

TEST(Normalize, CanonicalModelIsUnchanged) {
  const FifModel model = oracle::fig5_model();
  const Normalized n = normalize(model);
  EXPECT_TRUE(n.aux.is_identity());
  for (std::size_t k = 0; k < model.anchors.points.size(); ++k) {
    EXPECT_EQ(n.model.anchors.points[k].x, model.anchors.points[k].x);
    EXPECT_EQ(n.model.anchors.points[k].y, model.anchors.points[k].y);
  }
  for (std::size_t k = 0; k < model.order(); ++k) expect_map_near(n.model.maps[k], model.maps[k], 0.0);
}

TEST(Normalize, MovesEndpointsToCanonicalFrame) {
  const FifModel model = derive_maps(skewed_anchors(), {{0.5, -0.3}});
  const Normalized n = normalize(model);
  const auto& p = n.model.anchors.points;
  EXPECT_NEAR(p[0].x, 0.0, 1e-15);
  EXPECT_NEAR(p[2].x, 1.0, 1e-15);
  EXPECT_NEAR(p[0].y, 0.0, 1e-15);
  EXPECT_NEAR(p[2].y, 0.0, 1e-15);
  // x' = (x - 1)/3, y' = y - (2 + (x - 1)/3)
  EXPECT_NEAR(p[1].x, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1].y, 5.0 - (2.0 + 1.0 / 3.0), 1e-14);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(n.model.maps[k].a, model.maps[k].a);
    EXPECT_EQ(n.model.maps[k].d, model.maps[k].d);
  }
}

TEST(Normalize, ConjugatedMapsMatchFormulasInNewFrame) {
  const FifModel model = derive_maps(skewed_anchors(), {{0.5, -0.3}});
  const Normalized n = normalize(model);
  const auto want = oracle::general_maps(n.model.anchors, model.scalings.d);
  for (std::size_t k = 0; k < 2; ++k) expect_map_near(n.model.maps[k], want[k], 1e-13);
}

TEST(Normalize, RoundTripRestoresAnchorsAndMaps) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    InterpolationSet anchors;
    double x = u(rng);
    for (int k = 0; k < 5; ++k) {
      anchors.points.push_back({x, u(rng)});
      x += 0.1 + std::abs(u(rng));
    }
    const FifModel model = derive_maps(anchors, {{0.2, -0.5, 0.7, 0.1}});
    const Normalized n = normalize(model);
    EXPECT_NEAR(n.model.anchors.front().x, 0.0, 1e-15);
    EXPECT_NEAR(n.model.anchors.back().x, 1.0, 1e-15);
    EXPECT_NEAR(n.model.anchors.front().y, 0.0, 1e-14);
    EXPECT_NEAR(n.model.anchors.back().y, 0.0, 1e-14);
    const FifModel back = denormalize(n.model, n.aux);
    for (std::size_t k = 0; k < anchors.points.size(); ++k) {
      EXPECT_NEAR(back.anchors.points[k].x, anchors.points[k].x, 1e-12);
      EXPECT_NEAR(back.anchors.points[k].y, anchors.points[k].y, 1e-12);
    }
    for (std::size_t k = 0; k < model.order(); ++k) expect_map_near(back.maps[k], model.maps[k], 1e-11);
  }
}

TEST(Denormalize, IdentityAndScalingInvariance) {
  const FifModel model = oracle::fig5_model();
  const FifModel same = denormalize(model, AuxTransform{});
  for (std::size_t k = 0; k < model.order(); ++k) expect_map_near(same.maps[k], model.maps[k], 0.0);

  const AuxTransform aux{2.5, -0.7, 1.0, 3.0};
  const FifModel moved = denormalize(model, aux);
  EXPECT_EQ(moved.scalings.d, model.scalings.d);
  for (std::size_t k = 0; k < model.order(); ++k) EXPECT_EQ(moved.maps[k].d, model.maps[k].d);
  const auto want = oracle::general_maps(moved.anchors, model.scalings.d);
  for (std::size_t k = 0; k < model.order(); ++k) expect_map_near(moved.maps[k], want[k], 1e-12);
}

TEST(AuxTransform, InverseUndoesApply) {
  const AuxTransform aux{0.5, 1.5, -2.0, 0.25};
  const Point p{0.3, -0.8};
  const Point back = aux.invert(aux.apply(p));
  EXPECT_NEAR(back.x, p.x, 1e-15);
  EXPECT_NEAR(back.y, p.y, 1e-14);
  const AffineMapParams id = compose(aux.as_map(), aux.inverse_map());
  EXPECT_NEAR(id.a, 1.0, 1e-15);
  EXPECT_NEAR(id.d, 1.0, 1e-15);
  EXPECT_NEAR(id.c, 0.0, 1e-15);
  EXPECT_NEAR(id.e, 0.0, 1e-15);
  EXPECT_NEAR(id.f, 0.0, 1e-15);
  EXPECT_THROW(AuxTransform{0.0}.invert(p), DomainError);
}

TEST(Validate, AcceptsValidModel) { EXPECT_TRUE(validate(oracle::fig5_model()).ok()); }

TEST(Validate, FlagsContractivity) {
  FifModel model = oracle::fig5_model();
  model.scalings.d[0] = 1.0;
  model.maps[0].d = 1.0;
  const ValidationReport report = validate(model);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.has(Violation::Kind::kContractivity));
  EXPECT_TRUE(validate(model.anchors, model.scalings).has(Violation::Kind::kContractivity));
}

TEST(Validate, FlagsOrdering) {
  const InterpolationSet anchors{{{0.0, 0.0}, {0.5, 1.0}, {0.5, 0.3}, {1.0, 0.0}}};
  const ValidationReport report = validate(anchors, {{0.1, 0.1, 0.1}});
  EXPECT_TRUE(report.has(Violation::Kind::kOrdering));
  EXPECT_EQ(report.violations.front().index, 2u);
}

TEST(Validate, FlagsCountAndSizeProblems) {
  EXPECT_TRUE(validate(oracle::fig5_model().anchors, {{0.1}}).has(Violation::Kind::kCountMismatch));
  EXPECT_TRUE(validate({{{0.0, 0.0}, {1.0, 0.0}}}, {{0.1}}).has(Violation::Kind::kTooFewPoints));
}

TEST(Validate, FlagsBrokenEndpointConditions) {
  FifModel model = oracle::fig5_model();
  model.maps[2].f += 1e-6;
  EXPECT_TRUE(validate(model).has(Violation::Kind::kEndpointCondition));
}
