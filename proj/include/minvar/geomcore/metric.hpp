#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"

namespace minvar {

/// Rank test threshold on the Hadamard ratio det g / prod(g_ii), which lies in
/// (0, 1] and is invariant under rescaling of individual parameters.
inline constexpr double kDefaultRankTol = 1e-13;

struct MetricEval {
  Mat g;
  Mat g_inv;
  double det_g = 0.0;
};

inline MetricEval metric_from_gram(const Mat& g, double rank_tol = kDefaultRankTol) {
  const Index n = g.rows();
  MetricEval m;
  m.g = 0.5 * (g + g.transpose());
  if (n == 0) {
    m.g_inv = Mat(0, 0);
    m.det_g = 1.0;
    return m;
  }
  Eigen::LLT<Mat> llt(m.g);
  if (llt.info() != Eigen::Success) throw DegenerateMetric("first fundamental form is not positive definite");
  const Mat& l = llt.matrixLLT();
  double det = 1.0;
  double diag = 1.0;
  for (Index i = 0; i < n; ++i) {
    det *= l(i, i) * l(i, i);
    diag *= m.g(i, i);
  }
  if (!(det > rank_tol * diag)) {
    throw DegenerateMetric("first fundamental form is rank deficient (det g = " + std::to_string(det) + ")");
  }
  m.det_g = det;
  m.g_inv = llt.solve(Mat::Identity(n, n));
  m.g_inv = 0.5 * (m.g_inv + m.g_inv.transpose());
  return m;
}

/// g_ij = dF/du_i . dF/du_j
inline MetricEval metric(const PointEval& pe, double rank_tol = kDefaultRankTol) {
  return metric_from_gram(pe.jacobian.transpose() * pe.jacobian, rank_tol);
}

/// A matrix-valued function with its first partials: value and d[k] = dM/du_k.
struct MatrixJet {
  Mat value;
  std::vector<Mat> d;

  Index width() const { return static_cast<Index>(d.size()); }

  Jet1 entry(Index i, Index j) const {
    Vec g(width());
    for (Index k = 0; k < width(); ++k) g[k] = d[static_cast<size_t>(k)](i, j);
    return Jet1(value(i, j), std::move(g));
  }

  /// d(M^-1) = -M^-1 dM M^-1
  MatrixJet inverse() const {
    MatrixJet out;
    out.value = value.inverse();
    out.d.reserve(d.size());
    for (const auto& dk : d) out.d.push_back(-out.value * dk * out.value);
    return out;
  }

  /// d(det M) = det M tr(M^-1 dM)
  Jet1 det() const {
    const double det_v = value.rows() == 0 ? 1.0 : value.determinant();
    const Mat inv = value.rows() == 0 ? Mat(0, 0) : Mat(value.inverse());
    Vec g(width());
    for (Index k = 0; k < width(); ++k) g[k] = det_v * (inv.cwiseProduct(d[static_cast<size_t>(k)].transpose())).sum();
    return Jet1(det_v, std::move(g));
  }
};

/// Builds the metric together with its first partials from second derivatives
/// of the immersion: d_k g_ij = F_ik . F_j + F_i . F_jk.
inline MatrixJet metric_jet(const PointEval& pe) {
  const Index n = pe.param_dim();
  const Index kdim = pe.ambient_dim();
  MatrixJet mj;
  mj.value = pe.jacobian.transpose() * pe.jacobian;
  mj.d.reserve(static_cast<size_t>(n));
  Mat s(kdim, n);
  for (Index k = 0; k < n; ++k) {
    for (Index c = 0; c < kdim; ++c) s.row(c) = pe.second[static_cast<size_t>(c)].row(k);
    Mat dk = s.transpose() * pe.jacobian;
    mj.d.push_back(dk + dk.transpose());
  }
  return mj;
}

}  // namespace minvar
