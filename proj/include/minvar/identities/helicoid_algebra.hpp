#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/clifford.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/geomcore/metric.hpp"
#include "minvar/identities/lemma.hpp"

namespace minvar {

/// A GenHelicoidA parameter point split into its pieces, with the Clifford
/// frame and torus metric of every block.
struct HelicoidPoint {
  int L = 0;
  int N = 0;
  double theta = 0.0;
  std::vector<double> r;
  std::vector<std::vector<double>> u;
  std::vector<CliffordFrame> frames;
  std::vector<MetricEval> g;  // torus metrics g^s
  std::vector<double> a;      // D^s . J C^s

  int block_width() const { return 2 * N; }
  int theta_index() const { return block_width() * L; }
  int r_index(int s) const { return theta_index() + 1 + s; }
  int ambient_offset(int s) const { return s * (2 * N + 2); }
};

inline HelicoidPoint split_helicoid_point(const GenHelicoidASpec& spec, std::span<const double> params) {
  HelicoidPoint hp;
  hp.L = spec.pitch.L();
  if (spec.blocks.empty()) throw SpecError("GenHelicoidA: no blocks");
  hp.N = spec.blocks.front().N;
  const int w = hp.block_width();
  const size_t n = static_cast<size_t>(w * hp.L + 1 + hp.L);
  if (params.size() != n) {
    throw DimensionMismatch("GenHelicoidA: expected " + std::to_string(n) + " parameters, got " +
                            std::to_string(params.size()));
  }
  hp.theta = params[static_cast<size_t>(hp.theta_index())];
  for (int s = 0; s < hp.L; ++s) {
    const auto us = params.subspan(static_cast<size_t>(s * w), static_cast<size_t>(w));
    hp.u.emplace_back(us.begin(), us.end());
    hp.r.push_back(params[static_cast<size_t>(hp.r_index(s))]);
    hp.frames.push_back(clifford_frame(spec.blocks[static_cast<size_t>(s)], us));
    const auto& f = hp.frames.back();
    hp.g.push_back(metric_from_gram(f.dC.transpose() * f.dC));
    hp.a.push_back(f.d_dot_jc());
  }
  return hp;
}

/// Direct and block-formula versions of the helicoid's metric data at one point.
struct HelicoidAlgebra {
  double R = 0.0;
  double P = 0.0;         // lambda0^2 + sum lambda^2 r^2 (D.JC)^2
  double P_from_R = 0.0;  // R - sum lambda^2 r^2 w^T g^-1 w
  double det_direct = 0.0;
  double det_factored = 0.0;
  std::vector<Vec> d;               // d^s = lambda_s g^s^-1 w^s
  std::vector<double> Q;            // Q_t
  std::vector<double> sqrtG_factored;  // sqrt P r_t^2N sqrt g^t Q_t, one per t

  Mat G_direct;
  Mat G_formula;
  Mat G_inverse_formula;

  double metric_defect = 0.0;   // max |G_direct - G_formula| / max |G_direct|
  double det_defect = 0.0;      // |det_direct - det_factored| / |det_direct|
  double P_defect = 0.0;        // |P - P_from_R| relative to the largest term
  double sqrtG_defect = 0.0;    // max_t |sqrtG_factored[t] - sqrt(det_direct)| / sqrt(det_direct)
  double inverse_defect = 0.0;  // ‖G_direct G_inverse_formula - I‖_max
};

inline HelicoidAlgebra helicoid_algebra(const GenHelicoidASpec& spec, std::span<const double> params) {
  const HelicoidPoint hp = split_helicoid_point(spec, params);
  const Immersion imm = build_immersion(FamilySpec(spec));
  const PointEval pe = imm.evaluate(params);
  const int L = hp.L;
  const int w = hp.block_width();
  const Index n = imm.param_dim();
  const Index th = hp.theta_index();
  const double l0 = spec.pitch.lambda0;

  HelicoidAlgebra out;
  out.G_direct = pe.jacobian.transpose() * pe.jacobian;
  (void)metric_from_gram(out.G_direct);  // raises DegenerateMetric
  out.det_direct = out.G_direct.determinant();

  out.R = l0 * l0;
  out.P = l0 * l0;
  out.P_from_R = 0.0;
  std::vector<double> p_terms{l0 * l0};
  double correction = 0.0;
  for (int s = 0; s < L; ++s) {
    const double lam = spec.pitch.lambdas[static_cast<size_t>(s)];
    const double lr2 = lam * lam * hp.r[static_cast<size_t>(s)] * hp.r[static_cast<size_t>(s)];
    const double a = hp.a[static_cast<size_t>(s)];
    const auto& f = hp.frames[static_cast<size_t>(s)];
    const auto& gs = hp.g[static_cast<size_t>(s)];
    out.R += lr2;
    out.P += lr2 * a * a;
    const double q = lr2 * f.w.dot(gs.g_inv * f.w);
    correction += q;
    p_terms.push_back(lr2);
    p_terms.push_back(q);
    out.d.push_back(lam * (gs.g_inv * f.w));
  }
  out.P_from_R = out.R - correction;
  out.P_defect = relative_defect(out.P - out.P_from_R, p_terms);

  // Block formula for G in the order u^1..u^L, Theta, r_1..r_L.
  out.G_formula = Mat::Zero(n, n);
  for (int s = 0; s < L; ++s) {
    const double r = hp.r[static_cast<size_t>(s)];
    const double lam = spec.pitch.lambdas[static_cast<size_t>(s)];
    const Index o = s * w;
    out.G_formula.block(o, o, w, w) = r * r * hp.g[static_cast<size_t>(s)].g;
    const Vec b = lam * r * r * hp.frames[static_cast<size_t>(s)].w;
    out.G_formula.block(o, th, w, 1) = b;
    out.G_formula.block(th, o, 1, w) = b.transpose();
    out.G_formula(hp.r_index(s), hp.r_index(s)) = 1.0;
  }
  out.G_formula(th, th) = out.R;
  const double gmax = out.G_direct.cwiseAbs().maxCoeff();
  out.metric_defect = (out.G_direct - out.G_formula).cwiseAbs().maxCoeff() / gmax;

  // Displayed inverse: g^-1/r^2 + d d^T/P, -d/P, 1/P, identity on the radii.
  Vec dall = Vec::Zero(th);
  for (int s = 0; s < L; ++s) dall.segment(s * w, w) = out.d[static_cast<size_t>(s)];
  out.G_inverse_formula = Mat::Zero(n, n);
  for (int s = 0; s < L; ++s) {
    const double r = hp.r[static_cast<size_t>(s)];
    out.G_inverse_formula.block(s * w, s * w, w, w) = hp.g[static_cast<size_t>(s)].g_inv / (r * r);
    out.G_inverse_formula(hp.r_index(s), hp.r_index(s)) = 1.0;
  }
  out.G_inverse_formula.topLeftCorner(th, th) += dall * dall.transpose() / out.P;
  out.G_inverse_formula.block(0, th, th, 1) = -dall / out.P;
  out.G_inverse_formula.block(th, 0, 1, th) = -dall.transpose() / out.P;
  out.G_inverse_formula(th, th) = 1.0 / out.P;
  out.inverse_defect = (out.G_direct * out.G_inverse_formula - Mat::Identity(n, n)).cwiseAbs().maxCoeff();

  // det G = P (r_1..r_L)^4N prod det g^s, and its per-block square roots.
  const double four_n = 4.0 * hp.N;
  std::vector<double> block_factor;
  out.det_factored = out.P;
  for (int s = 0; s < L; ++s) {
    const double f = std::pow(std::abs(hp.r[static_cast<size_t>(s)]), four_n) * hp.g[static_cast<size_t>(s)].det_g;
    block_factor.push_back(f);
    out.det_factored *= f;
  }
  out.det_defect = std::abs(out.det_direct - out.det_factored) / std::abs(out.det_direct);

  const double sqrt_direct = std::sqrt(out.det_direct);
  for (int t = 0; t < L; ++t) {
    double prod = 1.0;
    for (int s = 0; s < L; ++s) {
      if (s != t) prod *= block_factor[static_cast<size_t>(s)];
    }
    const double q = std::sqrt(prod);
    out.Q.push_back(q);
    const double rt = std::abs(hp.r[static_cast<size_t>(t)]);
    const double sg = std::sqrt(out.P) * std::pow(rt, 2.0 * hp.N) * std::sqrt(hp.g[static_cast<size_t>(t)].det_g) * q;
    out.sqrtG_factored.push_back(sg);
    out.sqrtG_defect = std::max(out.sqrtG_defect, std::abs(sg - sqrt_direct) / sqrt_direct);
  }
  return out;
}

}  // namespace minvar
