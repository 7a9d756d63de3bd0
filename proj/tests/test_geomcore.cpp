#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "minvar/families/build.hpp"
#include "minvar/geomcore/immersion.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/geomcore/metric.hpp"
#include "test_support.hpp"

using namespace minvar;
using minvar::testing::rel_diff;
using minvar::testing::sample_point;

namespace {

struct HelicoidMap {  // (r, Theta) -> (r cos, r sin, Theta)
  template <class T>
  std::vector<T> operator()(std::span<const T> p) const {
    using std::cos;
    using std::sin;
    return {p[0] * cos(p[1]), p[0] * sin(p[1]), p[1]};
  }
};

struct PlaneMap {
  template <class T>
  std::vector<T> operator()(std::span<const T> p) const {
    return {p[0], p[1], T(0.0)};
  }
};

struct LineMap {
  template <class T>
  std::vector<T> operator()(std::span<const T> p) const {
    return {p[0], T(0.0), T(0.0)};
  }
};

struct TrigTorusMap {  // (1/sqrt2)(cos u, sin u, cos v, sin v)
  template <class T>
  std::vector<T> operator()(std::span<const T> p) const {
    using std::cos;
    using std::sin;
    const double s = 1.0 / std::numbers::sqrt2;
    return {s * cos(p[0]), s * sin(p[0]), s * cos(p[1]), s * sin(p[1])};
  }
};

Immersion helicoid() { return make_immersion("helicoid", 2, 3, Box{{0.2, 2.0}, {-3.0, 3.0}}, HelicoidMap{}); }
Immersion plane() { return make_immersion("plane", 2, 3, Box{{-1, 1}, {-1, 1}}, PlaneMap{}); }
Immersion sphere2() { return build_immersion(UnitSphereSpec{2, ChartKind::stereographic}); }

std::vector<Immersion> battery() {
  std::vector<Immersion> out{helicoid(), sphere2(), build_immersion(RoundCylinderSpec{1.3}),
                             build_immersion(LatitudeCircleSpec{0.5}),
                             build_immersion(LawsonSurfaceSpec{1.0, 2.0}),
                             build_immersion(ChoeHoppeSpec{2, 1.0}),
                             build_immersion(CliffordTorusSpec{CliffordBlock::standard(2)}),
                             build_immersion(standard_helicoid_a(PitchVector{0.7, {1.0, -0.5}}, 1))};
  return out;
}

}  // namespace

TEST(Metric, ClassicalHelicoid) {
  const std::array<double, 2> p{1.0, 0.0};
  const MetricEval m = metric(helicoid().evaluate(p));
  EXPECT_NEAR(m.g(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(m.g(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(m.g(1, 1), 2.0, 1e-15);
  EXPECT_NEAR(m.det_g, 2.0, 1e-14);
  EXPECT_LE((m.g * m.g_inv - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Metric, TrigCliffordTorusIsFlat) {
  const Immersion torus = make_immersion("torus", 2, 4, Box{{-3, 3}, {-3, 3}}, TrigTorusMap{});
  RandomStream rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = sample_point(torus, rng);
    const MetricEval m = metric(torus.evaluate(p));
    EXPECT_LE((m.g - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Metric, UnitSpeedLine) {
  const Immersion line = make_immersion("line", 1, 3, Box{{-1, 1}}, LineMap{});
  const std::array<double, 1> p{0.3};
  const MetricEval m = metric(line.evaluate(p));
  EXPECT_EQ(m.g(0, 0), 1.0);
  EXPECT_EQ(m.det_g, 1.0);
}

TEST(Metric, DegenerateChartThrows) {
  // (r, Theta) -> (r cos, r sin) without the height is singular at r = 0.
  auto polar = [](auto p) {
    using std::cos;
    using std::sin;
    using T = std::remove_cv_t<typename decltype(p)::element_type>;
    return std::vector<T>{p[0] * cos(p[1]), p[0] * sin(p[1])};
  };
  const Immersion imm = make_immersion("polar", 2, 2, Box{{-1, 1}, {-1, 1}}, polar);
  const std::array<double, 2> p{0.0, 0.4};
  EXPECT_THROW(metric(imm.evaluate(p)), DegenerateMetric);
}

TEST(LaplaceBeltrami, PlaneIsZero) {
  const std::array<double, 2> p{0.2, -0.7};
  EXPECT_EQ(laplace_beltrami(plane(), p).norm(), 0.0);
}

TEST(LaplaceBeltrami, SphereTakahashiIdentity) {
  const Immersion s = sphere2();
  RandomStream rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto p = sample_point(s, rng);
    const Vec f = Eigen::Map<const Vec>(s.position(p).data(), 3);
    EXPECT_LE((laplace_beltrami(s, p) + 2.0 * f).norm(), 1e-12);
  }
}

TEST(LaplaceBeltrami, HelicoidIsMinimal) {
  const Immersion h = helicoid();
  RandomStream rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto p = sample_point(h, rng);
    EXPECT_LE(laplace_beltrami(h, p).norm(), 1e-9);
  }
}

TEST(MeanCurvature, UnitCylinder) {
  const Immersion c = build_immersion(RoundCylinderSpec{1.0});
  RandomStream rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto p = sample_point(c, rng);
    const auto h = mean_curvature(c, p);
    EXPECT_NEAR(h.H_norm, 1.0, 1e-12);
    EXPECT_LE(h.tangential_residual, 1e-12);
  }
}

TEST(MeanCurvature, CylinderMatchesFiniteDifferences) {
  // Independent oracle: the arclength second derivative of the cross-section
  // circle, built from finite differences of the position only.
  const double r = 1.7;
  const Immersion c = build_immersion(RoundCylinderSpec{r});
  const std::array<double, 2> p{0.4, 0.1};
  const auto h = mean_curvature(c, p);
  const double step = 1e-4;
  auto pos = [&](double phi) { return Eigen::Map<const Vec>(c.position(std::array<double, 2>{phi, 0.1}).data(), 3).eval(); };
  const Vec second = (pos(0.4 + step) - 2.0 * pos(0.4) + pos(0.4 - step)) / (step * step * r * r);
  EXPECT_LE((h.H - second).norm(), 1e-6);
}

TEST(MeanCurvature, CliffordTorusIsRadial) {
  const Immersion torus = make_immersion("torus", 2, 4, Box{{-3, 3}, {-3, 3}}, TrigTorusMap{});
  RandomStream rng(21);
  for (int i = 0; i < 50; ++i) {
    const auto p = sample_point(torus, rng);
    const Vec f = Eigen::Map<const Vec>(torus.position(p).data(), 4);
    EXPECT_LE((mean_curvature(torus, p).H + 2.0 * f).norm(), 1e-12);
  }
}

TEST(MeanCurvature, ChoeHoppeIsMinimal) {
  for (int n : {1, 2, 3}) {
    const Immersion ch = build_immersion(ChoeHoppeSpec{n, 1.0});
    RandomStream rng(100 + n);
    for (int i = 0; i < 50; ++i) {
      const auto p = sample_point(ch, rng);
      EXPECT_LE(mean_curvature(ch, p).H_norm, 1e-9) << ch.name();
    }
  }
}

TEST(SphereResidual, GreatCircle) {
  const Immersion eq = build_immersion(LatitudeCircleSpec{0.0});
  RandomStream rng(4);
  for (int i = 0; i < 20; ++i) EXPECT_LE(sphere_minimality_residual(eq, sample_point(eq, rng), 1), 1e-10);
}

TEST(SphereResidual, LatitudeCircleClosedForm) {
  // For a circle of radius rho at height h: |F + Delta F| = sqrt((rho - 1/rho)^2 + h^2).
  const double h = 0.5;
  const double rho = std::sqrt(1.0 - h * h);
  const double expected = std::sqrt((rho - 1.0 / rho) * (rho - 1.0 / rho) + h * h);
  const Immersion lat = build_immersion(LatitudeCircleSpec{h});
  RandomStream rng(6);
  for (int i = 0; i < 20; ++i) {
    const double res = sphere_minimality_residual(lat, sample_point(lat, rng), 1);
    EXPECT_NEAR(res, expected, 1e-12);
    EXPECT_GE(res, 0.5);
  }
}

TEST(SphereResidual, LawsonSurface) {
  const Immersion law = build_immersion(LawsonSurfaceSpec{1.0, 2.0});
  RandomStream rng(9);
  for (int i = 0; i < 100; ++i) EXPECT_LE(sphere_minimality_residual(law, sample_point(law, rng), 2), 1e-9);
}

TEST(SphereResidual, OffSphereThrows) {
  const std::array<double, 2> p{1.5, 0.2};
  EXPECT_THROW(sphere_minimality_residual(helicoid(), p, 2), NotSpherical);
}

TEST(GeomProperties, NormalityOfMeanCurvature) {
  for (const auto& imm : battery()) {
    RandomStream rng(31);
    for (int i = 0; i < 100; ++i) {
      const auto p = sample_point(imm, rng);
      const auto h = mean_curvature(imm, p);
      EXPECT_LE(h.tangential_residual, 1e-9 * (1.0 + h.H_norm)) << imm.name();
    }
  }
}

TEST(GeomProperties, ContractionAndDivergenceFormsAgree) {
  for (const auto& imm : battery()) {
    RandomStream rng(77);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto p = sample_point(imm, rng);
      const PointEval pe = imm.evaluate(p);
      worst = std::max(worst, rel_diff(laplace_beltrami(pe, metric(pe)), laplace_beltrami_divergence(pe)));
    }
    EXPECT_LE(worst, 1e-8) << imm.name();
  }
}

TEST(GeomProperties, AffineReparametrizationInvariance) {
  for (const auto& imm : battery()) {
    RandomStream rng(55);
    const int n = imm.param_dim();
    for (int trial = 0; trial < 20; ++trial) {
      Mat a(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
      }
      a += 2.0 * Mat::Identity(n, n);
      const auto u = sample_point(imm, rng);
      const Vec b = Vec::Zero(n);
      const Immersion re = reparametrize(imm, a, b);
      const Vec v = a.partialPivLu().solve(Eigen::Map<const Vec>(u.data(), n));
      const std::vector<double> vv(v.data(), v.data() + n);
      const Vec h0 = laplace_beltrami(imm, u);
      const Vec h1 = laplace_beltrami(re, vv);
      EXPECT_LE(rel_diff(h0, h1), 1e-8) << imm.name();
    }
  }
}

TEST(GeomProperties, AmbientRigidMotionCovariance) {
  for (const auto& imm : battery()) {
    RandomStream rng(66);
    const int k = imm.ambient_dim();
    Mat g(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) g(i, j) = rng.normal();
    }
    const Mat rot = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(k, k);
    Vec t(k);
    for (Index i = 0; i < k; ++i) t[i] = rng.uniform(-3, 3);
    const Immersion moved = ambient_motion(imm, rot, t);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = sample_point(imm, rng);
      const Vec h0 = laplace_beltrami(imm, p);
      const Vec h1 = laplace_beltrami(moved, p);
      EXPECT_LE((rot * h0 - h1).norm(), 1e-10 * std::max(1.0, h0.norm())) << imm.name();
    }
  }
}

TEST(Immersion, ArityAndGuards) {
  const Immersion h = build_immersion(standard_helicoid_a(PitchVector{1.0, {1.0}}, 1));
  EXPECT_THROW(h.position(std::vector<double>{0.1}), DimensionMismatch);
  std::vector<double> p(static_cast<size_t>(h.param_dim()), 0.5);
  p.back() = 0.0;  // r_1 = 0
  ASSERT_TRUE(h.exclusion(p).has_value());
  EXPECT_EQ(*h.exclusion(p), "radius");
}
