#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/families/clifford.hpp"
#include "minvar/geomcore/metric.hpp"

namespace minvar {

/// |defect| / largest term magnitude; 0 when every term vanishes exactly.
inline double relative_defect(double defect, std::initializer_list<double> terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  if (scale == 0.0) return defect == 0.0 ? 0.0 : std::abs(defect);
  return std::abs(defect) / scale;
}

inline double relative_defect(double defect, const std::vector<double>& terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  if (scale == 0.0) return defect == 0.0 ? 0.0 : std::abs(defect);
  return std::abs(defect) / scale;
}

/// Clifford torus data carried as first-order jets in the block's own chart:
/// metric with derivatives, w_j and a = D.JC.
struct TorusJets {
  CliffordFrame frame;
  PointEval pe;   // of C
  MatrixJet g;
  std::vector<Jet1> w;
  Jet1 a;
};

inline TorusJets torus_jets(const CliffordBlock& block, std::span<const double> u) {
  TorusJets tj;
  tj.frame = clifford_frame(block, u);
  const Index n = block.param_dim();
  const Index k = block.ambient_dim();
  const auto vars = seed_variables(u);
  const auto c = block.point<Jet2>(vars);
  const auto d = block.normal<Jet2>(vars);
  const auto jc = apply_j(c);

  tj.pe.position = tj.frame.C;
  tj.pe.jacobian = tj.frame.dC;
  tj.pe.second.reserve(static_cast<size_t>(k));
  for (const auto& ci : c) tj.pe.second.push_back(ci.hessian(n));
  tj.g = metric_jet(tj.pe);

  for (Index j = 0; j < n; ++j) {
    Jet1 wj(0.0, Vec::Zero(n));
    for (size_t i = 0; i < c.size(); ++i) wj += c[i].partial(j) * jc[i].first_order();
    tj.w.push_back(wj);
  }
  Jet2 a(0.0);
  for (size_t i = 0; i < c.size(); ++i) a = a + d[i] * jc[i];
  tj.a = Jet1(a.value, a.gradient(n));
  return tj;
}

/// Defects of the five Clifford torus identities at one chart point, each
/// relative to the largest term of its identity. `res_e_derivative` is the
/// sub-assertion d(D.JC)/du_i = +2 w_i on the X coordinates and -2 w_i on the
/// Y coordinates.
struct LemmaResiduals {
  double res_a1 = 0.0;
  double res_a2 = 0.0;
  double res_b = 0.0;
  double res_c = 0.0;
  double res_d = 0.0;
  double res_e = 0.0;
  double res_e_derivative = 0.0;

  double max() const { return std::max({res_a1, res_a2, res_b, res_c, res_d, res_e, res_e_derivative}); }
};

inline LemmaResiduals lemma_magic_residuals(const CliffordBlock& block, std::span<const double> u) {
  const TorusJets tj = torus_jets(block, u);
  const CliffordFrame& f = tj.frame;
  const Index n = block.param_dim();
  const MetricEval m = metric_from_gram(f.dC.transpose() * f.dC);
  const double a = f.d_dot_jc();
  const Vec gw = m.g_inv * f.w;  // sum_j g^ij w_j
  const Vec da = tj.a.gradient(n);

  LemmaResiduals r;

  // (a) JC = a D + g^ij w_j C_i   and   -JD = a C + g^ij w_j D_i
  {
    std::vector<double> terms{f.JC.norm(), std::abs(a) * f.D.norm()};
    for (Index i = 0; i < n; ++i) terms.push_back(std::abs(gw[i]) * f.dC.col(i).norm());
    r.res_a1 = relative_defect((f.JC - a * f.D - f.dC * gw).norm(), terms);
  }
  {
    std::vector<double> terms{f.JD.norm(), std::abs(a) * f.C.norm()};
    for (Index i = 0; i < n; ++i) terms.push_back(std::abs(gw[i]) * f.dD.col(i).norm());
    r.res_a2 = relative_defect((-f.JD - a * f.C - f.dD * gw).norm(), terms);
  }

  // (b) 1 - a^2 = g^ij w_i w_j
  {
    const double q = f.w.dot(gw);
    r.res_b = relative_defect(1.0 - a * a - q, {1.0, a * a, q});
  }

  // (c) d_i (sqrt g g^ij w_j) = 0
  {
    const MatrixJet g_inv = tj.g.inverse();
    const Jet1 sqrt_g = sqrt(tj.g.det());
    double sum = 0.0;
    std::vector<double> terms;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const double t = (sqrt_g * g_inv.entry(i, j) * tj.w[static_cast<size_t>(j)]).d(i);
        sum += t;
        terms.push_back(t);
      }
    }
    r.res_c = relative_defect(sum, terms);
  }

  // (d) g^ij w_j d_i a = 0
  {
    double sum = 0.0;
    std::vector<double> terms;
    for (Index i = 0; i < n; ++i) {
      sum += gw[i] * da[i];
      terms.push_back(gw[i] * da[i]);
    }
    r.res_d = relative_defect(sum, terms);
  }

  // d_i a = +-2 w_i
  {
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double sign = i < block.N ? 2.0 : -2.0;
      worst = std::max(worst, relative_defect(da[i] - sign * f.w[i], {da[i], 2.0 * f.w[i]}));
    }
    r.res_e_derivative = worst;
  }

  // (e) g^ij d_i a C_j = -2 (JD + a C)
  {
    const Vec lhs = f.dC * (m.g_inv * da);
    std::vector<double> terms{2.0 * f.JD.norm(), 2.0 * std::abs(a) * f.C.norm()};
    const Vec gda = m.g_inv * da;
    for (Index j = 0; j < n; ++j) terms.push_back(std::abs(gda[j]) * f.dC.col(j).norm());
    r.res_e = relative_defect((lhs + 2.0 * (f.JD + a * f.C)).norm(), terms);
  }
  return r;
}

}  // namespace minvar
