#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/geomcore/metric.hpp"
#include "minvar/identities/helicoid_algebra.hpp"

namespace minvar {

/// The six pieces of sqrt(G) Delta_G (r_t e^{i lambda_t Theta} C^t), once from
/// their closed forms (S) and once from the generic operator split along the
/// blocks of G^-1 (T):
///   1  u-u through g^-1 / r^2      2  u-u through d d^T / P
///   3  d_u (G^{u Theta} d_Theta)   4  d_Theta (G^{Theta u} d_u)
///   5  d_Theta (G^{Theta Theta} d_Theta)   6  everything through the radii
struct ProofTerms {
  std::array<Vec, 6> S;
  std::array<Vec, 6> T;
  Vec sum;
  double scale = 0.0;         // max_i ‖S_i‖
  double sum_norm = 0.0;      // ‖S_1 + ... + S_6‖
  double sum_relative = 0.0;  // sum_norm / scale
  double cross_check = 0.0;   // ‖sum S - sqrt(G) Delta_G F_t‖ / scale
  std::array<double, 6> piece_defect{};  // ‖S_i - T_i‖ / scale

  double max_piece_defect() const { return *std::max_element(piece_defect.begin(), piece_defect.end()); }
};

namespace detail {

inline Vec rotate_split(const Vec& v, double angle) {
  std::vector<double> tmp(v.data(), v.data() + v.size());
  rotate_block<double>(std::span<double>(tmp), std::cos(angle), std::sin(angle), BlockLayout::split);
  return to_vec(tmp);
}

inline MatrixJet sub_jet(const MatrixJet& m, Index k) {
  MatrixJet out;
  out.value = m.value.topLeftCorner(k, k);
  for (const auto& d : m.d) out.d.push_back(d.topLeftCorner(k, k));
  return out;
}

inline MatrixJet embed_jet(const MatrixJet& m, Index n) {
  MatrixJet out;
  const Index k = m.value.rows();
  out.value = Mat::Zero(n, n);
  out.value.topLeftCorner(k, k) = m.value;
  for (const auto& d : m.d) {
    Mat e = Mat::Zero(n, n);
    e.topLeftCorner(k, k) = d;
    out.d.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

inline ProofTerms proof_terms(const GenHelicoidASpec& spec, int t, std::span<const double> params) {
  const HelicoidPoint hp = split_helicoid_point(spec, params);
  if (t < 0 || t >= hp.L) throw SpecError("proof_terms: block index " + std::to_string(t) + " out of range");
  const HelicoidAlgebra alg = helicoid_algebra(spec, params);
  const auto ts = static_cast<size_t>(t);
  const CliffordFrame& f = hp.frames[ts];
  const double lam = spec.pitch.lambdas[ts];
  const double r = hp.r[ts];
  const double q = alg.Q[ts];
  const double sqrt_g = std::sqrt(hp.g[ts].det_g);
  const double sqrt_p = std::sqrt(alg.P);
  const double a = hp.a[ts];
  const double two_n = 2.0 * hp.N;
  const double angle = lam * hp.theta;
  const auto e = [angle](const Vec& v) { return detail::rotate_split(v, angle); };

  const double cone = two_n * std::pow(r, two_n - 1.0) * q * sqrt_p * sqrt_g;
  const double k = lam * lam * std::pow(r, two_n + 1.0) * q * sqrt_g / sqrt_p;

  ProofTerms out;
  out.S[0] = -cone * e(f.C) - 2.0 * k * a * e(f.JD + a * f.C);
  out.S[1] = -k * (1.0 - a * a) * e(f.C);
  out.S[2] = k * e(f.C + a * f.JD);
  out.S[3] = out.S[2];
  out.S[4] = -k * e(f.C);
  out.S[5] = cone * e(f.C) + k * a * a * e(f.C);
  out.sum = Vec::Zero(f.C.size());
  for (const auto& s : out.S) {
    out.sum += s;
    out.scale = std::max(out.scale, s.norm());
  }
  out.sum_norm = out.sum.norm();
  const auto rel = [&out](double x) { return out.scale == 0.0 ? x : x / out.scale; };
  out.sum_relative = rel(out.sum_norm);

  // Generic operator, split along the blocks of G^-1.
  const Immersion imm = build_immersion(FamilySpec(spec));
  const PointEval pe = imm.evaluate(params);
  const auto jets = imm.jets(seed_variables(params));
  const Index n = imm.param_dim();
  const Index nu = hp.theta_index();
  const Index th = nu;
  const Index off = hp.ambient_offset(t);
  const Index m = 2 * hp.N + 2;

  const MatrixJet g = metric_jet(pe);
  (void)metric_from_gram(g.value);
  const MatrixJet g_inv = g.inverse();
  const Jet1 sqrt_big_g = sqrt(g.det());
  const MatrixJet a_inv = nu > 0 ? detail::embed_jet(detail::sub_jet(g, nu).inverse(), n) : MatrixJet{};

  for (auto& piece : out.T) piece = Vec::Zero(m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const bool ui = i < nu;
      const bool uj = j < nu;
      const bool radial = (i > th) || (j > th);
      for (Index c = 0; c < m; ++c) {
        const Jet1 dj = jets[static_cast<size_t>(off + c)].partial(j);
        if (ui && uj) {
          const Jet1 first = a_inv.entry(i, j);
          const Jet1 second = g_inv.entry(i, j) - first;
          out.T[0][c] += (sqrt_big_g * first * dj).d(i);
          out.T[1][c] += (sqrt_big_g * second * dj).d(i);
          continue;
        }
        const double v = (sqrt_big_g * g_inv.entry(i, j) * dj).d(i);
        if (radial) {
          out.T[5][c] += v;
        } else if (ui) {
          out.T[2][c] += v;
        } else if (uj) {
          out.T[3][c] += v;
        } else {
          out.T[4][c] += v;
        }
      }
    }
  }
  for (size_t i = 0; i < 6; ++i) out.piece_defect[i] = rel((out.S[i] - out.T[i]).norm());

  const Vec lb = laplace_beltrami_divergence(pe);
  out.cross_check = rel((out.sum - std::sqrt(alg.det_direct) * lb.segment(off, m)).norm());
  return out;
}

}  // namespace minvar
