#pragma once

// Forward-mode jets carrying exact first (Jet1) and second (Jet2) partial
// derivatives with respect to a dynamically sized list of parameters.
//
// A jet whose gradient is empty is a constant: all of its derivatives are
// zero. Constants mix freely with variables, so `2.0 * x` and `x + 1` work for
// both `double` and jet instantiations of the same generic code.

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"

namespace minvar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Jet1
// ---------------------------------------------------------------------------

struct Jet1 {
  double value = 0.0;
  Vec grad;  // empty for constants

  Jet1() = default;
  Jet1(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  Jet1(double v, Vec g) : value(v), grad(std::move(g)) {}

  static Jet1 variable(double v, Index n, Index k) {
    Jet1 j(v, Vec::Zero(n));
    j.grad[k] = 1.0;
    return j;
  }

  bool is_constant() const { return grad.size() == 0; }
  Index size() const { return grad.size(); }
  double d(Index k) const { return grad.size() ? grad[k] : 0.0; }
  Vec gradient(Index n) const { return is_constant() ? Vec::Zero(n) : grad; }

  Jet1& operator+=(const Jet1& o);
  Jet1& operator-=(const Jet1& o);
  Jet1& operator*=(const Jet1& o);
  Jet1& operator/=(const Jet1& o);
};

namespace detail {

inline void check_width(Index a, Index b) {
  if (a != b) {
    throw DimensionMismatch("jet width mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

inline Jet1 apply1(const Jet1& x, double f, double f1) {
  if (x.is_constant()) return Jet1(f);
  return Jet1(f, f1 * x.grad);
}

inline Jet1 apply2(const Jet1& x, const Jet1& y, double f, double fx, double fy) {
  if (x.is_constant()) return apply1(y, f, fy);
  if (y.is_constant()) return apply1(x, f, fx);
  check_width(x.size(), y.size());
  return Jet1(f, fx * x.grad + fy * y.grad);
}

}  // namespace detail

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return detail::apply2(a, b, a.value + b.value, 1.0, 1.0); }
inline Jet1 operator-(const Jet1& a, const Jet1& b) { return detail::apply2(a, b, a.value - b.value, 1.0, -1.0); }
inline Jet1 operator-(const Jet1& a) { return detail::apply1(a, -a.value, -1.0); }
inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return detail::apply2(a, b, a.value * b.value, b.value, a.value);
}
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  if (b.value == 0.0) throw DomainError("jet division by zero");
  const double inv = 1.0 / b.value;
  return detail::apply2(a, b, a.value * inv, inv, -a.value * inv * inv);
}

inline Jet1& Jet1::operator+=(const Jet1& o) { return *this = *this + o; }
inline Jet1& Jet1::operator-=(const Jet1& o) { return *this = *this - o; }
inline Jet1& Jet1::operator*=(const Jet1& o) { return *this = *this * o; }
inline Jet1& Jet1::operator/=(const Jet1& o) { return *this = *this / o; }

inline Jet1 sqrt(const Jet1& x) {
  if (x.value < 0.0 || (x.value == 0.0 && !x.is_constant())) {
    throw DomainError("sqrt of non-positive jet argument " + std::to_string(x.value));
  }
  const double s = std::sqrt(x.value);
  return detail::apply1(x, s, s > 0.0 ? 0.5 / s : 0.0);
}
inline Jet1 sin(const Jet1& x) { return detail::apply1(x, std::sin(x.value), std::cos(x.value)); }
inline Jet1 cos(const Jet1& x) { return detail::apply1(x, std::cos(x.value), -std::sin(x.value)); }
inline Jet1 exp(const Jet1& x) {
  const double e = std::exp(x.value);
  return detail::apply1(x, e, e);
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

struct Jet2 {
  double value = 0.0;
  Vec grad;  // empty for constants
  Mat hess;  // symmetric; empty for constants

  Jet2() = default;
  Jet2(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  Jet2(double v, Vec g, Mat h) : value(v), grad(std::move(g)), hess(std::move(h)) {}

  static Jet2 variable(double v, Index n, Index k) {
    Jet2 j(v, Vec::Zero(n), Mat::Zero(n, n));
    j.grad[k] = 1.0;
    return j;
  }

  bool is_constant() const { return grad.size() == 0; }
  Index size() const { return grad.size(); }
  double d(Index k) const { return grad.size() ? grad[k] : 0.0; }
  double dd(Index i, Index j) const { return grad.size() ? hess(i, j) : 0.0; }

  /// Value and gradient only.
  Jet1 first_order() const { return is_constant() ? Jet1(value) : Jet1(value, grad); }

  /// The partial derivative along parameter k, itself carried as a Jet1.
  Jet1 partial(Index k) const {
    if (is_constant()) return Jet1(0.0);
    return Jet1(grad[k], hess.row(k).transpose());
  }

  /// Dense gradient/Hessian of width n (constants expand to zeros).
  Vec gradient(Index n) const { return is_constant() ? Vec::Zero(n) : grad; }
  Mat hessian(Index n) const { return is_constant() ? Mat::Zero(n, n) : hess; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
};

namespace detail {

// Kernel-level reassociation can leave the last bit asymmetric.
inline void symmetrize(Mat& h) { h = 0.5 * (h + h.transpose()).eval(); }

// Second-order chain rule for a scalar primitive: value f, f', f''.
inline Jet2 apply1(const Jet2& x, double f, double f1, double f2) {
  if (x.is_constant()) return Jet2(f);
  Jet2 r;
  r.value = f;
  r.grad = f1 * x.grad;
  r.hess = f1 * x.hess;
  if (f2 != 0.0) {
    r.hess.noalias() += f2 * (x.grad * x.grad.transpose());
    detail::symmetrize(r.hess);
  }
  return r;
}

// Second-order chain rule for a binary primitive f(x, y).
inline Jet2 apply2(const Jet2& x, const Jet2& y, double f, double fx, double fy, double fxx, double fxy,
                   double fyy) {
  if (x.is_constant()) return apply1(y, f, fy, fyy);
  if (y.is_constant()) return apply1(x, f, fx, fxx);
  check_width(x.size(), y.size());
  Jet2 r;
  r.value = f;
  r.grad = fx * x.grad + fy * y.grad;
  r.hess = fx * x.hess + fy * y.hess;
  if (fxx != 0.0) r.hess.noalias() += fxx * (x.grad * x.grad.transpose());
  if (fyy != 0.0) r.hess.noalias() += fyy * (y.grad * y.grad.transpose());
  if (fxy != 0.0) {
    const Mat cross = x.grad * y.grad.transpose();
    r.hess.noalias() += fxy * (cross + cross.transpose());
  }
  symmetrize(r.hess);
  return r;
}

}  // namespace detail

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  if (a.is_constant()) {
    Jet2 r = b;
    r.value += a.value;
    return r;
  }
  if (b.is_constant()) {
    Jet2 r = a;
    r.value += b.value;
    return r;
  }
  detail::check_width(a.size(), b.size());
  return Jet2(a.value + b.value, a.grad + b.grad, a.hess + b.hess);
}

inline Jet2 operator-(const Jet2& a) {
  if (a.is_constant()) return Jet2(-a.value);
  return Jet2(-a.value, -a.grad, -a.hess);
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return detail::apply2(a, b, a.value * b.value, b.value, a.value, 0.0, 1.0, 0.0);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.value == 0.0) throw DomainError("jet division by zero");
  const double inv = 1.0 / b.value;
  const double q = a.value * inv;
  return detail::apply2(a, b, q, inv, -q * inv, 0.0, -inv * inv, 2.0 * q * inv * inv);
}

inline Jet2& Jet2::operator+=(const Jet2& o) { return *this = *this + o; }
inline Jet2& Jet2::operator-=(const Jet2& o) { return *this = *this - o; }
inline Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
inline Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

inline Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.value);
  return detail::apply1(x, s, std::cos(x.value), -s);
}

inline Jet2 cos(const Jet2& x) {
  const double c = std::cos(x.value);
  return detail::apply1(x, c, -std::sin(x.value), -c);
}

inline Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.value);
  return detail::apply1(x, e, e, e);
}

inline Jet2 sqrt(const Jet2& x) {
  if (x.value < 0.0 || (x.value == 0.0 && !x.is_constant())) {
    throw DomainError("sqrt of non-positive jet argument " + std::to_string(x.value));
  }
  const double s = std::sqrt(x.value);
  if (x.is_constant()) return Jet2(s);
  return detail::apply1(x, s, 0.5 / s, -0.25 / (s * x.value));
}

/// atan2(y, x) with the usual branch; derivatives are branch independent.
inline Jet2 atan2(const Jet2& y, const Jet2& x) {
  const double r2 = x.value * x.value + y.value * y.value;
  if (r2 == 0.0) throw DomainError("atan2 at the origin");
  const double r4 = r2 * r2;
  const double f = std::atan2(y.value, x.value);
  // f(y, x): f_y = x/r2, f_x = -y/r2
  return detail::apply2(y, x, f, x.value / r2, -y.value / r2, -2.0 * x.value * y.value / r4,
                        (y.value * y.value - x.value * x.value) / r4, 2.0 * x.value * y.value / r4);
}

inline Jet2 pow(const Jet2& x, int k) {
  if (k == 0) return Jet2(1.0);
  if (x.value == 0.0 && k < 0) throw DomainError("negative power of zero");
  const double p = std::pow(x.value, k);
  const double p1 = k * std::pow(x.value, k - 1);
  const double p2 = k == 1 ? 0.0 : static_cast<double>(k) * (k - 1) * std::pow(x.value, k - 2);
  return detail::apply1(x, p, p1, p2);
}

inline Jet2 pow(const Jet2& x, double a) {
  if (x.value <= 0.0) throw DomainError("real power of non-positive jet argument");
  const double p = std::pow(x.value, a);
  return detail::apply1(x, p, a * p / x.value, a * (a - 1.0) * p / (x.value * x.value));
}

// ---------------------------------------------------------------------------
// Evaluation helpers
// ---------------------------------------------------------------------------

/// Seeds one Jet2 variable per coordinate of p.
inline std::vector<Jet2> seed_variables(std::span<const double> p) {
  const auto n = static_cast<Index>(p.size());
  std::vector<Jet2> vars;
  vars.reserve(p.size());
  for (Index k = 0; k < n; ++k) vars.push_back(Jet2::variable(p[static_cast<size_t>(k)], n, k));
  return vars;
}

/// Value, gradient and Hessian of a scalar function written generically over
/// its scalar type. `f` is invoked with a `std::span<const Jet2>`.
template <class F>
Jet2 jet_eval(F&& f, std::span<const double> p) {
  const auto vars = seed_variables(p);
  Jet2 out = f(std::span<const Jet2>(vars));
  const auto n = static_cast<Index>(p.size());
  if (out.is_constant()) return Jet2(out.value, Vec::Zero(n), Mat::Zero(n, n));
  return out;
}

}  // namespace minvar
