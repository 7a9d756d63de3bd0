#pragma once

#include <cmath>
#include <span>
#include <string>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"

namespace minvar {

inline constexpr double kBranchTol = 1e-2;

namespace detail {

/// (sum x_k^2 - y_k^2, 2 sum x_k y_k) over interleaved (x1, y1, ..., xN, yN).
template <class T>
std::pair<T, T> graph_re_im(std::span<const T> x) {
  T re(0.0);
  T im(0.0);
  for (size_t k = 0; k + 1 < x.size(); k += 2) {
    re += x[k] * x[k] - x[k + 1] * x[k + 1];
    im += 2.0 * (x[k] * x[k + 1]);
  }
  return {re, im};
}

inline void check_graph_point(int n, std::span<const double> x, double branch_tol) {
  if (n < 1 || static_cast<int>(x.size()) != 2 * n) {
    throw DimensionMismatch("graph point must have 2N = " + std::to_string(2 * n) + " coordinates");
  }
  const auto [re, im] = graph_re_im<double>(x);
  if (std::abs(re) + std::abs(im) <= branch_tol) {
    throw BranchLocusError("graph point lies within " + std::to_string(branch_tol) + " of the branch locus");
  }
}

}  // namespace detail

/// f = (1/2) arg((x1 + i y1)^2 + ... + (xN + i yN)^2).
inline double choe_hoppe_graph_f(int n, std::span<const double> x, double branch_tol = kBranchTol) {
  detail::check_graph_point(n, x, branch_tol);
  const auto [re, im] = detail::graph_re_im<double>(x);
  return 0.5 * std::atan2(im, re);
}

inline Jet2 choe_hoppe_graph_jet(int n, std::span<const double> x, double branch_tol = kBranchTol) {
  detail::check_graph_point(n, x, branch_tol);
  return jet_eval(
      [](std::span<const Jet2> v) {
        const auto [re, im] = detail::graph_re_im<Jet2>(v);
        return 0.5 * atan2(im, re);
      },
      x);
}

/// sum_k d/dx_k (f_k / W), W = sqrt(1 + |grad f|^2); zero iff the graph of f
/// is minimal at x.
inline double choe_hoppe_graph_residual(int n, std::span<const double> x, double branch_tol = kBranchTol) {
  const Jet2 f = choe_hoppe_graph_jet(n, x, branch_tol);
  const auto dim = static_cast<Index>(x.size());
  Jet1 w2(1.0);
  for (Index k = 0; k < dim; ++k) w2 += f.partial(k) * f.partial(k);
  const Jet1 w = sqrt(w2);
  double div = 0.0;
  for (Index k = 0; k < dim; ++k) div += (f.partial(k) / w).d(k);
  return div;
}

}  // namespace minvar
