#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/families/graph.hpp"
#include "minvar/families/screw.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/geomcore/metric.hpp"
#include "minvar/harness/plan.hpp"
#include "minvar/harness/report.hpp"
#include "minvar/rng.hpp"

namespace minvar {

namespace detail {

inline VerificationReport start_report(std::string campaign, const FamilySpecPtr& spec, const SamplePlan& plan,
                                       const TolerancePolicy& tol) {
  plan.validate();
  tol.validate();
  if (!spec) throw SpecError("missing family spec");
  VerificationReport r;
  r.campaign = std::move(campaign);
  r.spec = spec;
  r.plan = plan;
  r.tolerances = tol;
  return r;
}

inline Vec eval_position(const Immersion& imm, std::span<const double> p) {
  return to_vec(imm.position(p));
}

// Sampling salts keep the point sets of different campaigns apart.
inline constexpr std::uint64_t kSaltMinimality = 0;
inline constexpr std::uint64_t kSaltScrew = 1;
inline constexpr std::uint64_t kSaltCone = 2;
inline constexpr std::uint64_t kSaltSphere = 3;
inline constexpr std::uint64_t kSaltJoin = 4;
inline constexpr std::uint64_t kSaltRays = 5;

}  // namespace detail

/// Normalized mean curvature ‖H‖ / (1 + ‖dF‖^2) and the tangential part of H
/// at every sampled point.
inline VerificationReport verify_minimality(const FamilySpecPtr& spec, const SamplePlan& plan,
                                            const TolerancePolicy& tol) {
  VerificationReport report = detail::start_report("minimality", spec, plan, tol);
  const Immersion imm = build_immersion(*spec);
  const bool negative = imm.traits().negative_control;
  const SampleSet samples = sample_points(imm, plan, detail::kSaltMinimality);
  ResidualStats h;
  ResidualStats tangential;
  for (const auto& p : samples.points) {
    const PointEval pe = imm.evaluate(p);
    const MeanCurvatureEval mc = mean_curvature(pe, metric(pe));
    const double scale = 1.0 + pe.jacobian.squaredNorm();
    h.add(mc.H_norm / scale, mc.H_norm);
    tangential.add(mc.tangential_residual / scale, mc.tangential_residual);
  }
  report.checks.push_back(h.finish("mean_curvature", tol.tol_H, negative, tol, samples.excluded));
  report.checks.push_back(tangential.finish("tangential_residual", tol.tol_H, false, tol, samples.excluded));
  return report;
}

/// screw_action(Lambda, t, F(p)) against F(p with Theta + t), t uniform in
/// [-2 pi, 2 pi], relative to max(1, ‖F‖).
inline VerificationReport verify_screw_invariance(const FamilySpecPtr& spec, const SamplePlan& plan,
                                                  const TolerancePolicy& tol = {}) {
  VerificationReport report = detail::start_report("screw", spec, plan, tol);
  const Immersion imm = build_immersion(*spec);
  const auto& tr = imm.traits();
  if (!tr.screw || !tr.theta_param) throw SpecError(imm.name() + " carries no screw motion");
  const SampleSet samples = sample_points(imm, plan, detail::kSaltScrew);
  ResidualStats stats;
  for (size_t i = 0; i < samples.points.size(); ++i) {
    RandomStream rng = RandomStream::split(plan.seed, i, 100 + detail::kSaltScrew);
    const double t = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    const auto& p = samples.points[i];
    const auto f = imm.position(p);
    auto shifted = p;
    shifted[static_cast<size_t>(*tr.theta_param)] += t;
    const Vec lhs = detail::to_vec(screw_action(*tr.screw, t, f));
    const Vec rhs = detail::eval_position(imm, shifted);
    const double d = (lhs - rhs).norm();
    stats.add(d / std::max(1.0, rhs.norm()), d);
  }
  report.checks.push_back(stats.finish("screw_invariance", tol.tol_symmetry, false, tol, samples.excluded));
  return report;
}

/// F(s r) = s F(r) along the radial parameters for s uniform in [0.1, 10],
/// together with the minimality check.
inline VerificationReport verify_cone_scaling(const FamilySpecPtr& spec, const SamplePlan& plan,
                                              const TolerancePolicy& tol = {}) {
  VerificationReport report = detail::start_report("cone_scaling", spec, plan, tol);
  const Immersion imm = build_immersion(*spec);
  const auto& tr = imm.traits();
  if (!tr.conical) throw SpecError(imm.name() + " is not a cone (nonzero height pitch?)");
  const SampleSet samples = sample_points(imm, plan, detail::kSaltCone);
  ResidualStats stats;
  for (size_t i = 0; i < samples.points.size(); ++i) {
    RandomStream rng = RandomStream::split(plan.seed, i, 100 + detail::kSaltCone);
    const double s = rng.uniform(0.1, 10.0);
    const auto& p = samples.points[i];
    auto scaled = p;
    for (int k : tr.radial_params) scaled[static_cast<size_t>(k)] *= s;
    const Vec lhs = detail::eval_position(imm, scaled);
    const Vec rhs = s * detail::eval_position(imm, p);
    const double d = (lhs - rhs).norm();
    stats.add(d / std::max(1.0, rhs.norm()), d);
  }
  report.checks.push_back(stats.finish("cone_scaling", tol.tol_symmetry, false, tol, samples.excluded));
  const VerificationReport minimal = verify_minimality(spec, plan, tol);
  for (const auto& c : minimal.checks) report.checks.push_back(c);
  return report;
}

/// Three-way check over a spherical base Sigma^n: (a) ‖n F + Delta F‖ on
/// Sigma, (b) the same on the spherical join in S^(L(M+1)-1) with dimension
/// n + L - 1, (c) ‖H‖ ‖F‖ on the L-rays cone, which is invariant under scaling.
inline VerificationReport takahashi_equivalence(const FamilySpecPtr& base, int L, const SamplePlan& plan,
                                                const TolerancePolicy& tol,
                                                ChartKind xs_chart = ChartKind::stereographic) {
  if (L < 1) throw SpecError("takahashi: L must be >= 1");
  VerificationReport report =
      detail::start_report("takahashi", make_spec(LRaysConeSpec{L, base}), plan, tol);
  const Immersion sigma = build_immersion(*base);
  if (!sigma.traits().spherical) throw NotSpherical(sigma.name() + " is not declared to lie in a unit sphere");
  const bool negative = sigma.traits().negative_control;
  const int n = sigma.param_dim();
  SamplePlan own_domain = plan;  // plan.box only fits Sigma
  own_domain.box.clear();

  {
    const SampleSet s = sample_points(sigma, plan, detail::kSaltSphere);
    ResidualStats stats;
    for (const auto& p : s.points) stats.add(sphere_minimality_residual(sigma, p, n));
    report.checks.push_back(stats.finish("takahashi_a_sphere", tol.tol_H, negative, tol, s.excluded));
  }
  {
    const Immersion join = build_immersion(FamilySpec(SphericalJoinSpec{L, xs_chart, base}));
    const SampleSet s = sample_points(join, own_domain, detail::kSaltJoin);
    ResidualStats stats;
    for (const auto& p : s.points) stats.add(sphere_minimality_residual(join, p, n + L - 1));
    report.checks.push_back(stats.finish("takahashi_b_join", tol.tol_H, negative, tol, s.excluded));
  }
  {
    const Immersion cone = build_immersion(FamilySpec(LRaysConeSpec{L, base}));
    const SampleSet s = sample_points(cone, own_domain, detail::kSaltRays);
    ResidualStats stats;
    for (const auto& p : s.points) {
      const PointEval pe = cone.evaluate(p);
      const MeanCurvatureEval mc = mean_curvature(pe, metric(pe));
      stats.add(mc.H_norm * pe.position.norm(), mc.H_norm);
    }
    report.checks.push_back(stats.finish("takahashi_c_cone", tol.tol_H, negative, tol, s.excluded));
  }
  const Verdict first = report.checks.front().verdict;
  report.verdicts_agree = std::all_of(report.checks.begin(), report.checks.end(),
                                      [first](const CheckResult& c) { return c.verdict == first; });
  return report;
}

/// The minimal graph equation for the Choe-Hoppe height function over R^(2N),
/// sampled in plan.box (default [-1, 1]^(2N)) away from the branch locus.
inline VerificationReport verify_graph_pde(int n, const SamplePlan& plan, const TolerancePolicy& tol,
                                           double branch_tol = kBranchTol) {
  if (n < 1) throw SpecError("graph: N must be >= 1");
  VerificationReport report = detail::start_report("graph_pde", make_spec(ChoeHoppeSpec{n}), plan, tol);
  Box box = plan.box;
  if (box.empty()) box.assign(static_cast<size_t>(2 * n), Interval{-1.0, 1.0});
  if (static_cast<int>(box.size()) != 2 * n) throw DimensionMismatch("graph: plan.box must have 2N intervals");
  ResidualStats stats;
  long long excluded = 0;
  std::vector<double> x(box.size());
  for (int i = 0; i < plan.count; ++i) {
    RandomStream rng = RandomStream::split(plan.seed, static_cast<std::uint64_t>(i), 6);
    int rejects = 0;
    while (true) {
      for (size_t k = 0; k < box.size(); ++k) x[k] = rng.uniform(box[k].lo, box[k].hi);
      try {
        stats.add(choe_hoppe_graph_residual(n, x, branch_tol));
        break;
      } catch (const BranchLocusError&) {
        ++excluded;
        if (++rejects >= plan.max_rejects) throw SamplingExhausted("graph: branch guard excludes every draw");
      }
    }
  }
  report.checks.push_back(stats.finish("graph_pde", tol.tol_H, false, tol, excluded));
  return report;
}

/// Runs `f` and stores its wall time on the returned report.
template <class F>
VerificationReport timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r = f();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace minvar
