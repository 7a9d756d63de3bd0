#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "minvar/families/build.hpp"
#include "minvar/families/clifford.hpp"
#include "minvar/families/graph.hpp"
#include "minvar/families/screw.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/geomcore/metric.hpp"
#include "test_support.hpp"

using namespace minvar;
using minvar::testing::sample_point;

namespace {

Vec as_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())); }

PitchVector random_pitch(RandomStream& rng, int l, bool zero_lambda0 = false) {
  PitchVector pv;
  pv.lambda0 = zero_lambda0 ? 0.0 : rng.uniform(-2, 2);
  for (int t = 0; t < l; ++t) pv.lambdas.push_back(rng.uniform(-2, 2));
  return pv;
}

std::vector<FamilySpec> screw_families() {
  RandomStream rng(404);
  std::vector<FamilySpec> out;
  out.emplace_back(standard_helicoid_a(random_pitch(rng, 2), 1));
  out.emplace_back(standard_helicoid_a(random_pitch(rng, 1), 2, ChartKind::trigonometric));
  GenHelicoidASpec rotated = standard_helicoid_a(random_pitch(rng, 2), 1);
  rotated.blocks[0] = rotated.blocks[0].with_unitary_seed(7);
  rotated.blocks[1] = rotated.blocks[1].with_unitary_seed(8);
  out.emplace_back(rotated);
  out.emplace_back(GenHelicoidBSpec{1.3, 0.4, 3, CliffordBlock::standard(1)});
  out.emplace_back(ChoeHoppeSpec{2, 0.8});
  out.emplace_back(ChoeHoppeSpec{1, 1.0});
  out.emplace_back(BdjSpec{PitchVector{0.5, {1.0, 2.0, -1.0}}});
  return out;
}

std::vector<FamilySpec> cone_families() {
  RandomStream rng(405);
  std::vector<FamilySpec> out;
  out.emplace_back(CliffordConeSpec{CliffordBlock::standard(2)});
  out.emplace_back(LRaysCliffordConeSpec{2, CliffordBlock::standard(1)});
  out.emplace_back(HarveyLawsonConeSpec{1});
  out.emplace_back(standard_helicoid_a(random_pitch(rng, 2, true), 1));
  out.emplace_back(GenHelicoidBSpec{0.9, 0.0, 2, CliffordBlock::standard(1)});
  out.emplace_back(BdjSpec{PitchVector{0.0, {1.0, 2.0}}});
  out.emplace_back(LRaysConeSpec{3, make_spec(LatitudeCircleSpec{0.3})});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// screw_action
// ---------------------------------------------------------------------------

TEST(Screw, ZeroTimeIsIdentity) {
  RandomStream rng(1);
  const PitchVector pv = random_pitch(rng, 2);
  std::vector<double> q(2 * 4 + 1);
  for (auto& x : q) x = rng.uniform(-1, 1);
  EXPECT_EQ(screw_action(pv, 0.0, q), q);
}

TEST(Screw, QuarterTurnOfClassicalScrew) {
  const std::vector<double> q{1.0, 0.0, 0.0};
  const auto out = screw_action(PitchVector{1.0, {1.0}}, std::numbers::pi / 2, q);
  EXPECT_NEAR(out[0], 0.0, 1e-15);
  EXPECT_NEAR(out[1], 1.0, 1e-15);
  EXPECT_NEAR(out[2], std::numbers::pi / 2, 1e-15);
}

TEST(Screw, GroupLaw) {
  RandomStream rng(2);
  for (int i = 0; i < 100; ++i) {
    const PitchVector pv = random_pitch(rng, 2);
    std::vector<double> q(2 * 6 + 1);
    for (auto& x : q) x = rng.uniform(-2, 2);
    const double s = rng.uniform(-3, 3);
    const double t = rng.uniform(-3, 3);
    const Vec a = as_vec(screw_action(pv, s, screw_action(pv, t, q)));
    const Vec b = as_vec(screw_action(pv, s + t, q));
    EXPECT_LE((a - b).norm(), 1e-12 * std::max(1.0, b.norm()));
  }
}

TEST(Screw, DimensionMismatch) {
  const std::vector<double> q(6, 0.0);
  EXPECT_THROW(screw_action(PitchVector{1.0, {1.0, 1.0}}, 0.3, q), DimensionMismatch);
}

// ---------------------------------------------------------------------------
// sphere charts and Clifford frames
// ---------------------------------------------------------------------------

TEST(SphereChart, ImageOnUnitSphere) {
  RandomStream rng(12);
  for (auto kind : {ChartKind::stereographic, ChartKind::trigonometric}) {
    for (int n : {1, 2, 3, 4}) {
      const SphereChart c{n, kind, 1};
      for (int i = 0; i < 50; ++i) {
        std::vector<double> u;
        for (const auto& iv : c.default_box()) u.push_back(rng.uniform(iv.lo, iv.hi));
        EXPECT_NEAR(as_vec(c(std::span<const double>(u))).norm(), 1.0, 1e-12);
      }
    }
  }
}

TEST(SphereChart, TrigGuardFiresNearPoles) {
  const SphereChart c{2, ChartKind::trigonometric, 1};
  EXPECT_TRUE(c.excluded(std::vector<double>{1e-3, 0.5}));
  EXPECT_FALSE(c.excluded(std::vector<double>{0.5, 1e-3}));
}

TEST(CliffordFrame, TrigClosedFormsN1) {
  const CliffordBlock b = CliffordBlock::standard(1, ChartKind::trigonometric);
  RandomStream rng(13);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(-3, 3);
    const double v = rng.uniform(-3, 3);
    const auto f = clifford_frame(b, std::vector<double>{u, v});
    EXPECT_NEAR(f.d_dot_jc(), -std::cos(u - v), 1e-12);
    EXPECT_NEAR(f.w[0], 0.5 * std::sin(u - v), 1e-12);
    EXPECT_NEAR(f.w[1], 0.5 * std::sin(u - v), 1e-12);
  }
}

TEST(CliffordFrame, AlignedPoint) {
  const CliffordBlock b = CliffordBlock::standard(1, ChartKind::trigonometric);
  const auto f = clifford_frame(b, std::vector<double>{0.8, 0.8});
  EXPECT_NEAR(f.d_dot_jc(), -1.0, 1e-12);
  EXPECT_NEAR(f.w.norm(), 0.0, 1e-12);
}

TEST(CliffordFrame, OrthonormalityWithUnitaries) {
  RandomStream rng(14);
  for (int n : {0, 1, 2, 3}) {
    for (bool rotate : {false, true}) {
      CliffordBlock b = CliffordBlock::standard(n);
      if (rotate) b = b.with_unitary_seed(99 + static_cast<std::uint64_t>(n));
      b.validate();
      for (int i = 0; i < 20; ++i) {
        std::vector<double> u;
        for (const auto& iv : b.default_box()) u.push_back(rng.uniform(iv.lo, iv.hi));
        const auto f = clifford_frame(b, u);
        EXPECT_NEAR(f.C.norm(), 1.0, 1e-12);
        EXPECT_NEAR(f.D.norm(), 1.0, 1e-12);
        EXPECT_NEAR(f.C.dot(f.D), 0.0, 1e-12);
        EXPECT_NEAR(f.C.dot(f.JC), 0.0, 1e-12);
      }
    }
  }
}

TEST(CliffordBlock, RejectsRealRotationThatBreaksJ) {
  CliffordBlock b = CliffordBlock::standard(1);
  Mat r = Mat::Identity(4, 4);
  r(0, 0) = r(1, 1) = std::cos(0.3);
  r(0, 1) = -std::sin(0.3);
  r(1, 0) = std::sin(0.3);
  b.unitary = r;
  EXPECT_THROW(b.validate(), SpecError);
  b.unitary = random_unitary_real(2, 5);
  EXPECT_NO_THROW(b.validate());
}

TEST(CliffordFrame, WrongArityAndExcludedPoint) {
  const CliffordBlock b = CliffordBlock::standard(2, ChartKind::trigonometric);
  EXPECT_THROW(clifford_frame(b, std::vector<double>{0.1, 0.2}), DimensionMismatch);
  EXPECT_THROW(clifford_frame(b, std::vector<double>{0.0, 0.2, 1.0, 0.5}), ChartDomainError);
}

TEST(CliffordTorus, MetricIsBlockDiagonal) {
  RandomStream rng(15);
  for (int n : {1, 2, 3}) {
    for (auto kind : {ChartKind::stereographic, ChartKind::trigonometric}) {
      const Immersion t = build_immersion(CliffordTorusSpec{CliffordBlock::standard(n, kind)});
      for (int i = 0; i < 20; ++i) {
        const MetricEval m = metric(t.evaluate(sample_point(t, rng)));
        EXPECT_LE(m.g.topRightCorner(n, n).cwiseAbs().maxCoeff(), 1e-13);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// build_immersion
// ---------------------------------------------------------------------------

TEST(Build, GenHelicoidDimensions) {
  RandomStream rng(16);
  for (int l : {1, 2, 3}) {
    for (int n : {0, 1, 2}) {
      const Immersion h = build_immersion(standard_helicoid_a(random_pitch(rng, l), n));
      EXPECT_EQ(h.param_dim(), 2 * n * l + 1 + l);
      EXPECT_EQ(h.ambient_dim(), l * (2 * n + 2) + 1);
      EXPECT_EQ(h.position(sample_point(h, rng)).size(), static_cast<size_t>(h.ambient_dim()));
    }
  }
}

TEST(Build, HelicoidBWithZeroPitchIsRaysCone) {
  RandomStream rng(17);
  for (int l : {1, 2, 3}) {
    for (int n : {0, 1, 2}) {
      const CliffordBlock b = CliffordBlock::standard(n);
      const Immersion hb = build_immersion(GenHelicoidBSpec{0.0, 0.0, l, b});
      const Immersion cone = build_immersion(LRaysCliffordConeSpec{l, b});
      for (int i = 0; i < 20; ++i) {
        std::vector<double> p;
        for (const auto& iv : hb.domain()) p.push_back(rng.uniform(iv.lo, iv.hi));
        std::vector<double> q(p.begin(), p.begin() + 2 * n);
        q.insert(q.end(), p.begin() + 2 * n + 1, p.end());
        const auto a = hb.position(p);
        const auto c = cone.position(q);
        ASSERT_EQ(a.size(), c.size() + 1);
        for (size_t k = 0; k < c.size(); ++k) EXPECT_EQ(a[k], c[k]);
        EXPECT_EQ(a.back(), 0.0);
      }
    }
  }
}

TEST(Build, ChoeHoppeN1IsClassicalHelicoid) {
  const Immersion ch = build_immersion(ChoeHoppeSpec{1, 1.0});
  ASSERT_EQ(ch.param_dim(), 2);
  ASSERT_EQ(ch.ambient_dim(), 3);
  const auto p0 = ch.position(std::vector<double>{0.0, 1.0});
  EXPECT_NEAR(p0[0], 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(p0[1], 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(p0[2], 0.0);
  RandomStream rng(18);
  for (int i = 0; i < 50; ++i) {
    const double th = rng.uniform(-3, 3);
    const double rho = rng.uniform(0.3, 2);
    const auto p = ch.position(std::vector<double>{th, rho});
    EXPECT_NEAR(p[0], rho * std::cos(th + std::numbers::pi / 4), 1e-14);
    EXPECT_NEAR(p[1], rho * std::sin(th + std::numbers::pi / 4), 1e-14);
    EXPECT_NEAR(p[2], th, 1e-15);
  }
}

TEST(Build, ChoeHoppeImageSweepsTheCone) {
  // Rotating back by -Theta must land on sum p^2 = sum q^2.
  const Immersion ch = build_immersion(ChoeHoppeSpec{3, 0.7});
  RandomStream rng(19);
  for (int i = 0; i < 50; ++i) {
    const auto par = sample_point(ch, rng);
    const auto x = ch.position(par);
    const double th = x.back() / 0.7;
    double pp = 0.0;
    double qq = 0.0;
    for (size_t k = 0; k + 1 < x.size(); k += 2) {
      const double p = x[k] * std::cos(th) + x[k + 1] * std::sin(th);
      const double q = -x[k] * std::sin(th) + x[k + 1] * std::cos(th);
      pp += p * p;
      qq += q * q;
    }
    EXPECT_NEAR(pp, qq, 1e-12);
  }
}

TEST(Build, HarveyLawsonPosition) {
  for (int n : {0, 1, 2}) {
    const Immersion hl = build_immersion(HarveyLawsonConeSpec{n});
    EXPECT_EQ(hl.param_dim(), 2 * n + 2);
    EXPECT_EQ(hl.ambient_dim(), 4 * n + 4);
    RandomStream rng(20);
    const auto p = sample_point(hl, rng);
    const SphereChart c{n, ChartKind::stereographic, 1};
    const auto x = c(std::span<const double>(p).first(static_cast<size_t>(n)));
    const auto y = c(std::span<const double>(p).subspan(static_cast<size_t>(n), static_cast<size_t>(n)));
    std::vector<double> expected;
    for (double r : {p[2 * n], p[2 * n + 1]}) {
      for (double v : x) expected.push_back(r * v);
      for (double v : y) expected.push_back(r * v);
    }
    EXPECT_EQ(hl.position(p), expected);
  }
}

TEST(Build, BdjIsGenHelicoidWithN0UpToUnitary) {
  // N = 0 tori are points (+-1 +- i)/sqrt2; BDJ uses the point 1. Both sweeps
  // have the same metric, so compare the first fundamental forms.
  const PitchVector pv{0.6, {1.0, -1.5}};
  const Immersion bdj = build_immersion(BdjSpec{pv});
  const Immersion ga = build_immersion(standard_helicoid_a(pv, 0));
  RandomStream rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto p = sample_point(ga, rng);
    const Mat g1 = metric(bdj.evaluate(p)).g;
    const Mat g2 = metric(ga.evaluate(p)).g;
    EXPECT_LE((g1 - g2).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Build, SpecErrors) {
  GenHelicoidASpec bad = standard_helicoid_a(PitchVector{1.0, {1.0, 2.0}}, 1);
  bad.blocks.pop_back();
  EXPECT_THROW(build_immersion(bad), SpecError);
  EXPECT_THROW(build_immersion(GenHelicoidASpec{PitchVector{1.0, {}}, {}}), SpecError);
  EXPECT_THROW(build_immersion(LatitudeCircleSpec{1.0}), SpecError);
  EXPECT_THROW(build_immersion(LawsonSurfaceSpec{0.0, 0.0}), SpecError);
  EXPECT_THROW(build_immersion(ChoeHoppeSpec{0, 1.0}), SpecError);
  EXPECT_THROW(build_immersion(LRaysConeSpec{2, make_spec(RoundCylinderSpec{1.0})}), SpecError);
  SphericalSliceSpec slice{standard_helicoid_a(PitchVector{0.5, {1.0}}, 1), ChartKind::stereographic};
  EXPECT_THROW(build_immersion(slice), SpecError);
}

// ---------------------------------------------------------------------------
// family invariants
// ---------------------------------------------------------------------------

TEST(FamilyInvariants, ScrewInvariance) {
  for (const auto& spec : screw_families()) {
    const Immersion imm = build_immersion(spec);
    ASSERT_TRUE(imm.traits().screw.has_value()) << imm.name();
    ASSERT_TRUE(imm.traits().theta_param.has_value());
    const auto theta = static_cast<size_t>(*imm.traits().theta_param);
    RandomStream rng(500);
    for (int i = 0; i < 100; ++i) {
      auto p = sample_point(imm, rng);
      const double t = rng.uniform(-4, 4);
      const Vec moved = as_vec(screw_action(*imm.traits().screw, t, imm.position(p)));
      p[theta] += t;
      const Vec shifted = as_vec(imm.position(p));
      EXPECT_LE((moved - shifted).norm(), 1e-12 * std::max(1.0, shifted.norm())) << imm.name();
    }
  }
}

TEST(FamilyInvariants, ConeScaling) {
  for (const auto& spec : cone_families()) {
    const Immersion imm = build_immersion(spec);
    ASSERT_TRUE(imm.traits().conical) << imm.name();
    RandomStream rng(501);
    for (int i = 0; i < 100; ++i) {
      auto p = sample_point(imm, rng);
      const double s = rng.uniform(0.1, 10.0);
      const Vec base = as_vec(imm.position(p));
      for (int r : imm.traits().radial_params) p[static_cast<size_t>(r)] *= s;
      const Vec scaled = as_vec(imm.position(p));
      EXPECT_LE((scaled - s * base).norm(), 1e-12 * std::max(1.0, scaled.norm())) << imm.name();
    }
  }
}

TEST(FamilyInvariants, SphereContainment) {
  std::vector<FamilySpec> specs;
  RandomStream prng(502);
  specs.emplace_back(SphericalSliceSpec{standard_helicoid_a(random_pitch(prng, 2, true), 1), ChartKind::stereographic});
  specs.emplace_back(SphericalSliceSpec{standard_helicoid_a(random_pitch(prng, 3, true), 0), ChartKind::trigonometric});
  specs.emplace_back(SphericalJoinSpec{3, ChartKind::stereographic, make_spec(CliffordTorusSpec{CliffordBlock::standard(1)})});
  specs.emplace_back(SphericalJoinSpec{2, ChartKind::trigonometric, make_spec(LatitudeCircleSpec{0.5})});
  specs.emplace_back(LawsonSurfaceSpec{1.0, 2.0});
  for (const auto& spec : specs) {
    const Immersion imm = build_immersion(spec);
    EXPECT_TRUE(imm.traits().spherical);
    RandomStream rng(503);
    for (int i = 0; i < 100; ++i) {
      EXPECT_NEAR(as_vec(imm.position(sample_point(imm, rng))).norm(), 1.0, 1e-12) << imm.name();
    }
  }
}

TEST(FamilyInvariants, GuardsExcludeDegeneratePoints) {
  const Immersion h = build_immersion(standard_helicoid_a(PitchVector{0.0, {1.0}}, 1, ChartKind::trigonometric));
  // lambda0 = 0 and u = v makes D.JC = -1, so P = r^2; at w = 0 nothing
  // vanishes. At u - v = pi/2 the torus is orthogonal to J and P = 0.
  std::vector<double> p{0.3 + std::numbers::pi / 2, 0.3, 0.0, 1.0};
  ASSERT_TRUE(h.exclusion(p).has_value());
  EXPECT_EQ(*h.exclusion(p), "P");
  p[0] = 0.3;
  EXPECT_FALSE(h.exclusion(p).has_value());
}

// ---------------------------------------------------------------------------
// graph function
// ---------------------------------------------------------------------------

TEST(Graph, PositiveRealAxis) {
  const std::vector<double> x{1.0, 0.0};
  EXPECT_EQ(choe_hoppe_graph_f(1, x), 0.0);
  EXPECT_LE(std::abs(choe_hoppe_graph_residual(1, x)), 1e-9);
}

TEST(Graph, N2RandomPoints) {
  RandomStream rng(600);
  double worst = 0.0;
  int used = 0;
  while (used < 1000) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform(0.5, 2.0);
    try {
      worst = std::max(worst, std::abs(choe_hoppe_graph_residual(2, x)));
      ++used;
    } catch (const BranchLocusError&) {
    }
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Graph, ZeroHomogeneous) {
  RandomStream rng(601);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform(-2, 2);
    std::vector<double> y = x;
    for (auto& v : y) v *= 2.0;
    EXPECT_NEAR(choe_hoppe_graph_f(3, x), choe_hoppe_graph_f(3, y), 1e-12);
  }
}

TEST(Graph, GraphOfHelicoidN1) {
  // f = arg(x + i y): the classical helicoid z = Theta as a graph.
  const std::vector<double> x{0.3, 0.9};
  EXPECT_NEAR(choe_hoppe_graph_f(1, x), std::atan2(0.9, 0.3), 1e-15);
}

TEST(Graph, BranchLocusAndArity) {
  EXPECT_THROW(choe_hoppe_graph_f(2, std::vector<double>{1.0, 1.0, 1.0, -1.0}), BranchLocusError);
  EXPECT_THROW(choe_hoppe_graph_f(2, std::vector<double>{1.0, 1.0}), DimensionMismatch);
}
