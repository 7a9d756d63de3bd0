#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/families/sphere_chart.hpp"
#include "minvar/geomcore/immersion.hpp"
#include "minvar/rng.hpp"

namespace minvar {

/// J(a; b) = (-b; a) on a block stored as [real parts; imaginary parts].
template <class T>
std::vector<T> apply_j(const std::vector<T>& v) {
  const size_t half = v.size() / 2;
  std::vector<T> out;
  out.reserve(v.size());
  for (size_t i = 0; i < half; ++i) out.push_back(-v[half + i]);
  for (size_t i = 0; i < half; ++i) out.push_back(v[i]);
  return out;
}

/// Real (2m x 2m) matrix of the complex structure on C^m in split layout.
inline Mat complex_structure(Index m) {
  Mat j = Mat::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = -Mat::Identity(m, m);
  j.bottomLeftCorner(m, m) = Mat::Identity(m, m);
  return j;
}

/// Random unitary of C^m (QR of a Gaussian matrix), as its real representation
/// [[A, -B], [B, A]] for U = A + iB.
inline Mat random_unitary_real(Index m, std::uint64_t seed) {
  RandomStream rng(seed);
  Eigen::MatrixXcd z(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) z(i, j) = {rng.normal(), rng.normal()};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
  Mat u(2 * m, 2 * m);
  u.topLeftCorner(m, m) = q.real();
  u.topRightCorner(m, m) = -q.imag();
  u.bottomLeftCorner(m, m) = q.imag();
  u.bottomRightCorner(m, m) = q.real();
  return u;
}

/// One 2N-dimensional Clifford torus (1/sqrt2) S^N x (1/sqrt2) S^N in
/// S^(2N+1), charted by two sphere charts and optionally moved by a unitary
/// of C^(N+1). Parameters are the X chart's N coordinates followed by the
/// Y chart's N coordinates.
struct CliffordBlock {
  int N = 1;
  SphereChart chart_x{1};
  SphereChart chart_y{1};
  std::optional<std::uint64_t> unitary_seed;
  Mat unitary;  // real (2N+2) representation; empty means identity

  static CliffordBlock standard(int n, ChartKind kind = ChartKind::stereographic) {
    CliffordBlock b;
    b.N = n;
    b.chart_x = SphereChart{n, kind, 1};
    b.chart_y = SphereChart{n, kind, 1};
    return b;
  }

  CliffordBlock with_unitary_seed(std::uint64_t seed) const {
    CliffordBlock b = *this;
    b.unitary_seed = seed;
    b.unitary = random_unitary_real(N + 1, seed);
    return b;
  }

  int param_dim() const { return 2 * N; }
  int ambient_dim() const { return 2 * N + 2; }

  void validate() const {
    if (N < 0) throw SpecError("Clifford block N must be >= 0");
    chart_x.validate();
    chart_y.validate();
    if (chart_x.N != N || chart_y.N != N) throw SpecError("Clifford block charts must both have dimension N");
    if (unitary.size() == 0) return;
    const Index m = ambient_dim();
    if (unitary.rows() != m || unitary.cols() != m) throw SpecError("Clifford block unitary has the wrong shape");
    const Mat j = complex_structure(N + 1);
    if ((unitary * j - j * unitary).cwiseAbs().maxCoeff() > 1e-12) {
      throw SpecError("Clifford block rotation does not commute with J (not complex linear)");
    }
    if ((unitary.transpose() * unitary - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
      throw SpecError("Clifford block rotation is not an isometry");
    }
  }

  Box default_box() const {
    Box box = chart_x.default_box();
    for (const auto& i : chart_y.default_box()) box.push_back(i);
    return box;
  }

  std::vector<ExclusionGuard> guards(int offset, const std::string& label) const {
    auto g = chart_x.guards(offset, label + ".x");
    for (auto& h : chart_y.guards(offset + N, label + ".y")) g.push_back(std::move(h));
    return g;
  }

  bool excluded(std::span<const double> u) const {
    return chart_x.excluded(u.first(static_cast<size_t>(N))) ||
           chart_y.excluded(u.subspan(static_cast<size_t>(N), static_cast<size_t>(N)));
  }

  /// C(u) = U (1/sqrt2)(X; Y).
  template <class T>
  std::vector<T> point(std::span<const T> u) const {
    return assemble(u, 1.0);
  }

  /// D(u) = U (1/sqrt2)(X; -Y), the unit normal of the torus in S^(2N+1).
  template <class T>
  std::vector<T> normal(std::span<const T> u) const {
    return assemble(u, -1.0);
  }

 private:
  template <class T>
  std::vector<T> assemble(std::span<const T> u, double y_sign) const {
    const auto n = static_cast<size_t>(N);
    const auto x = chart_x(u.first(n));
    const auto y = chart_y(u.subspan(n, n));
    const double s = 1.0 / std::numbers::sqrt2;
    std::vector<T> c;
    c.reserve(2 * n + 2);
    for (const auto& xi : x) c.push_back(s * xi);
    for (const auto& yi : y) c.push_back((s * y_sign) * yi);
    if (unitary.size() == 0) return c;
    std::vector<T> out;
    out.reserve(c.size());
    for (Index i = 0; i < unitary.rows(); ++i) {
      T acc(0.0);
      for (Index j = 0; j < unitary.cols(); ++j) {
        if (unitary(i, j) != 0.0) acc += unitary(i, j) * c[static_cast<size_t>(j)];
      }
      out.push_back(std::move(acc));
    }
    return out;
  }
};

/// Frame of a Clifford torus at one chart point.
struct CliffordFrame {
  Vec C, D, JC, JD;
  Vec w;   // w_j = dC/du_j . JC
  Mat dC;  // (2N+2) x 2N
  Mat dD;

  double d_dot_jc() const { return D.dot(JC); }
};

namespace detail {

inline Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())); }

inline void jets_to(const std::vector<Jet2>& jets, Index n, Vec& value, Mat& jac) {
  const auto k = static_cast<Index>(jets.size());
  value.resize(k);
  jac.resize(k, n);
  for (Index c = 0; c < k; ++c) {
    value[c] = jets[static_cast<size_t>(c)].value;
    jac.row(c) = jets[static_cast<size_t>(c)].gradient(n).transpose();
  }
}

}  // namespace detail

inline CliffordFrame clifford_frame(const CliffordBlock& block, std::span<const double> u) {
  if (static_cast<int>(u.size()) != block.param_dim()) {
    throw DimensionMismatch("clifford_frame: expected " + std::to_string(block.param_dim()) + " parameters");
  }
  if (block.excluded(u)) throw ChartDomainError("clifford_frame: chart point is excluded");
  const auto vars = seed_variables(u);
  const Index n = block.param_dim();
  CliffordFrame f;
  detail::jets_to(block.point<Jet2>(vars), n, f.C, f.dC);
  detail::jets_to(block.normal<Jet2>(vars), n, f.D, f.dD);
  const Mat j = complex_structure(block.N + 1);
  f.JC = j * f.C;
  f.JD = j * f.D;
  f.w = f.dC.transpose() * f.JC;
  return f;
}

}  // namespace minvar
