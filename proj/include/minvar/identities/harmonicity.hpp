#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/identities/helicoid_algebra.hpp"
#include "minvar/identities/lemma.hpp"

namespace minvar {

struct ThetaHarmonicity {
  double laplacian = 0.0;     // |Delta_G (lambda0 Theta)|
  double relative = 0.0;      // |sum of flux terms| / largest flux term
  double block_defect = 0.0;  // max over blocks of the relative inner-sum defect
  std::vector<double> per_block;
};

/// Relative defect of sum_ij d/du^s_i ( P^-1/2 sqrt g^s g^s^ij w^s_j ) for one
/// block, with P differentiated only through the block's own D.JC.
inline double harmonic_block_defect(const GenHelicoidASpec& spec, const HelicoidPoint& hp, int s) {
  const auto& block = spec.blocks[static_cast<size_t>(s)];
  const TorusJets tj = torus_jets(block, hp.u[static_cast<size_t>(s)]);
  const Index n = block.param_dim();
  if (n == 0) return 0.0;

  const double l0 = spec.pitch.lambda0;
  double rest = l0 * l0;
  for (int t = 0; t < hp.L; ++t) {
    if (t == s) continue;
    const double lr = spec.pitch.lambdas[static_cast<size_t>(t)] * hp.r[static_cast<size_t>(t)];
    rest += lr * lr * hp.a[static_cast<size_t>(t)] * hp.a[static_cast<size_t>(t)];
  }
  const double lr = spec.pitch.lambdas[static_cast<size_t>(s)] * hp.r[static_cast<size_t>(s)];
  const Jet1 p = Jet1(rest) + (lr * lr) * tj.a * tj.a;
  const Jet1 weight = sqrt(tj.g.det()) / sqrt(p);
  const MatrixJet g_inv = tj.g.inverse();

  double sum = 0.0;
  std::vector<double> terms;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double t = (weight * g_inv.entry(i, j) * tj.w[static_cast<size_t>(j)]).d(i);
      sum += t;
      terms.push_back(t);
    }
  }
  return relative_defect(sum, terms);
}

/// Harmonicity of the height coordinate lambda0 Theta on the helicoid, through
/// the divergence-form operator on the assembled metric, plus the per-block
/// inner sums that the harmonicity reduces to.
inline ThetaHarmonicity theta_harmonicity(const GenHelicoidASpec& spec, std::span<const double> params) {
  const HelicoidPoint hp = split_helicoid_point(spec, params);
  const Immersion imm = build_immersion(FamilySpec(spec));
  const PointEval pe = imm.evaluate(params);
  const MatrixJet g = metric_jet(pe);
  (void)metric_from_gram(g.value);

  ThetaHarmonicity out;
  const Index n = imm.param_dim();
  const double l0 = spec.pitch.lambda0;
  const Jet2 phi = l0 == 0.0 ? Jet2(0.0) : l0 * Jet2::variable(hp.theta, n, hp.theta_index());
  const ScalarLaplacian lap = scalar_laplacian(g, phi);
  out.laplacian = std::abs(lap.value);
  double sum = 0.0;
  for (double t : lap.terms) sum += t;
  out.relative = relative_defect(sum, lap.terms);

  for (int s = 0; s < hp.L; ++s) {
    out.per_block.push_back(harmonic_block_defect(spec, hp, s));
    out.block_defect = std::max(out.block_defect, out.per_block.back());
  }
  return out;
}

}  // namespace minvar
