#pragma once

// Central-difference gradient and Hessian with Richardson extrapolation.
// Used only as an independent oracle for the jets.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"

namespace minvar {

/// Step policy for the finite-difference oracle. The step along coordinate i
/// is base_step * max(1, |x_i|); each Richardson level halves it. With
/// `richardson_levels` levels the truncation error is O(h^(2*levels)).
struct StepPolicy {
  double base_step = 1e-4;
  int richardson_levels = 2;

  void validate() const {
    if (!(base_step > 0.0)) throw SpecError("StepPolicy.base_step must be positive");
    if (richardson_levels < 1) throw SpecError("StepPolicy.richardson_levels must be >= 1");
  }
};

namespace detail {

// Richardson tableau on estimates D(h), D(h/2), ... with error series in h^2.
inline double richardson(std::vector<double> d) {
  double factor = 4.0;
  for (size_t m = 1; m < d.size(); ++m) {
    for (size_t k = d.size() - 1; k >= m; --k) {
      d[k] = d[k] + (d[k] - d[k - 1]) / (factor - 1.0);
    }
    factor *= 4.0;
  }
  return d.back();
}

}  // namespace detail

/// Finite-difference Jet2 of a scalar function `f(std::span<const double>)`.
template <class F>
Jet2 fd_jet(F&& f, std::span<const double> p, const StepPolicy& policy = {}) {
  policy.validate();
  const auto n = static_cast<Index>(p.size());
  std::vector<double> x(p.begin(), p.end());
  auto eval = [&](const std::vector<double>& at) -> double {
    const double v = f(std::span<const double>(at));
    if (!std::isfinite(v)) throw DomainError("finite-difference stencil left the function's domain");
    return v;
  };
  const double f0 = eval(x);

  std::vector<double> steps(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    steps[static_cast<size_t>(i)] = policy.base_step * std::max(1.0, std::abs(x[static_cast<size_t>(i)]));
  }

  const auto levels = static_cast<size_t>(policy.richardson_levels);
  Vec grad(n);
  Mat hess(n, n);

  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<size_t>(i);
    std::vector<double> d1(levels), d2(levels);
    for (size_t l = 0; l < levels; ++l) {
      const double h = steps[ui] / static_cast<double>(1u << l);
      auto xp = x, xm = x;
      xp[ui] += h;
      xm[ui] -= h;
      const double fp = eval(xp), fm = eval(xm);
      d1[l] = (fp - fm) / (2.0 * h);
      d2[l] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    grad[i] = detail::richardson(d1);
    hess(i, i) = detail::richardson(d2);
  }

  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
      std::vector<double> dij(levels);
      for (size_t l = 0; l < levels; ++l) {
        const double hi = steps[ui] / static_cast<double>(1u << l);
        const double hj = steps[uj] / static_cast<double>(1u << l);
        auto at = [&](double si, double sj) {
          auto y = x;
          y[ui] += si * hi;
          y[uj] += sj * hj;
          return eval(y);
        };
        dij[l] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
      }
      hess(i, j) = hess(j, i) = detail::richardson(dij);
    }
  }
  return Jet2(f0, std::move(grad), std::move(hess));
}

}  // namespace minvar
