#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"
#include "minvar/geomcore/metric.hpp"

namespace minvar {

/// Default |‖F‖ - 1| slack for the sphere-minimality residual.
inline constexpr double kSphereTol = 1e-12;

namespace detail {

// sum_ij g^ij d2F/du_i du_j
inline Vec trace_second(const PointEval& pe, const Mat& g_inv) {
  Vec m(pe.ambient_dim());
  for (Index c = 0; c < pe.ambient_dim(); ++c) m[c] = g_inv.cwiseProduct(pe.second[static_cast<size_t>(c)]).sum();
  return m;
}

}  // namespace detail

/// Laplace-Beltrami of the immersion in Christoffel-contraction form,
/// g^ij (F_ij - Gamma^k_ij F_k) with Gamma^k_ij = g^kl (F_ij . F_l).
inline Vec laplace_beltrami(const PointEval& pe, const MetricEval& m) {
  const Vec trace = detail::trace_second(pe, m.g_inv);
  const Vec christoffel = pe.jacobian * (m.g_inv * (pe.jacobian.transpose() * trace));
  return trace - christoffel;
}

inline Vec laplace_beltrami(const Immersion& imm, std::span<const double> p) {
  const PointEval pe = imm.evaluate(p);
  return laplace_beltrami(pe, metric(pe));
}

/// Laplace-Beltrami in divergence form, (1/sqrt g) d_i (sqrt g g^ij d_j F),
/// with the metric entries differentiated as jets.
inline Vec laplace_beltrami_divergence(const PointEval& pe) {
  const Index n = pe.param_dim();
  const MatrixJet g = metric_jet(pe);
  (void)metric_from_gram(g.value);  // rank check
  const MatrixJet g_inv = g.inverse();
  const Jet1 sqrt_g = sqrt(g.det());

  // v^j = (1/sqrt g) sum_i d_i(sqrt g g^ij)
  Vec v = Vec::Zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Jet1 flux = sqrt_g * g_inv.entry(i, j);
      v[j] += flux.d(i);
    }
  }
  v /= sqrt_g.value;
  return detail::trace_second(pe, g_inv.value) + pe.jacobian * v;
}

inline Vec laplace_beltrami_divergence(const Immersion& imm, std::span<const double> p) {
  return laplace_beltrami_divergence(imm.evaluate(p));
}

/// The divergence-form Laplacian of a scalar function phi on parameter space,
/// returned with its individual flux-derivative terms d_i(sqrt g g^ij d_j phi).
struct ScalarLaplacian {
  double value = 0.0;        // Delta_g phi
  double sqrt_g = 0.0;
  std::vector<double> terms;  // one per i, not divided by sqrt g

  double largest_term() const {
    double m = 0.0;
    for (double t : terms) m = std::max(m, std::abs(t));
    return m;
  }
};

inline ScalarLaplacian scalar_laplacian(const MatrixJet& g, const Jet2& phi) {
  const Index n = g.width();
  const MatrixJet g_inv = g.inverse();
  const Jet1 sqrt_g = sqrt(g.det());
  ScalarLaplacian out;
  out.sqrt_g = sqrt_g.value;
  out.terms.assign(static_cast<size_t>(n), 0.0);
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    Jet1 flux(0.0, Vec::Zero(n));
    for (Index j = 0; j < n; ++j) flux += sqrt_g * g_inv.entry(i, j) * phi.partial(j);
    out.terms[static_cast<size_t>(i)] = flux.d(i);
    sum += flux.d(i);
  }
  out.value = sum / sqrt_g.value;
  return out;
}

struct MeanCurvatureEval {
  Vec H;
  double tangential_residual = 0.0;
  double H_norm = 0.0;
};

/// Mean curvature vector H = Delta_g F and the norm of its tangential part,
/// obtained from the normal equations on g.
inline MeanCurvatureEval mean_curvature(const PointEval& pe, const MetricEval& m) {
  MeanCurvatureEval out;
  out.H = laplace_beltrami(pe, m);
  const Vec coeff = m.g_inv * (pe.jacobian.transpose() * out.H);
  out.tangential_residual = (pe.jacobian * coeff).norm();
  out.H_norm = out.H.norm();
  return out;
}

inline MeanCurvatureEval mean_curvature(const Immersion& imm, std::span<const double> p) {
  const PointEval pe = imm.evaluate(p);
  return mean_curvature(pe, metric(pe));
}

/// ‖H‖ / (1 + ‖dF‖_F^2): scale-aware mean curvature used by campaigns.
inline double normalized_mean_curvature(const PointEval& pe, const MeanCurvatureEval& h) {
  return h.H_norm / (1.0 + pe.jacobian.squaredNorm());
}

/// ‖n F + Delta_g F‖ for an immersion into the unit sphere; zero exactly where
/// the immersion is minimal in the sphere.
inline double sphere_minimality_residual(const Immersion& imm, std::span<const double> p, int n,
                                         double sphere_tol = kSphereTol) {
  const PointEval pe = imm.evaluate(p);
  const double radius = pe.position.norm();
  if (std::abs(radius - 1.0) > sphere_tol) {
    throw NotSpherical(imm.name() + ": |F| = " + std::to_string(radius) + " is not 1");
  }
  const Vec lb = laplace_beltrami(pe, metric(pe));
  return (static_cast<double>(n) * pe.position + lb).norm();
}

}  // namespace minvar
