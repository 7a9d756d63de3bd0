#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"

namespace minvar {

enum class ChartKind { stereographic, trigonometric };

inline std::string to_string(ChartKind k) {
  return k == ChartKind::stereographic ? "stereographic" : "trigonometric";
}

inline ChartKind chart_kind_from_string(const std::string& s) {
  if (s == "stereographic") return ChartKind::stereographic;
  if (s == "trigonometric") return ChartKind::trigonometric;
  throw SpecError("unknown chart kind '" + s + "'");
}

/// Guard on |sin(phi)| for the polar angles of a trigonometric chart.
inline constexpr double kTrigGuard = 1e-2;

/// A local chart u -> X(u) of the unit sphere S^N in R^(N+1).
///
/// stereographic: X = (2u, 1 - |u|^2) / (1 + |u|^2), no singularities.
/// trigonometric: hyperspherical angles; X_0 = cos(phi_1), ...,
///   X_N = sin(phi_1)...sin(phi_N); singular where sin(phi_k) = 0, k < N.
/// For N = 0 the chart has no parameters and returns the point `branch` of S^0.
struct SphereChart {
  int N = 1;
  ChartKind kind = ChartKind::stereographic;
  int branch = 1;

  int param_dim() const { return N; }
  int ambient_dim() const { return N + 1; }

  void validate() const {
    if (N < 0) throw SpecError("sphere chart dimension must be >= 0");
    if (branch != 1 && branch != -1) throw SpecError("sphere chart branch must be +1 or -1");
  }

  template <class T>
  std::vector<T> operator()(std::span<const T> u) const {
    using std::cos;
    using std::sin;
    std::vector<T> x;
    x.reserve(static_cast<size_t>(N + 1));
    if (N == 0) {
      x.emplace_back(static_cast<double>(branch));
      return x;
    }
    if (kind == ChartKind::stereographic) {
      T rho = u[0] * u[0];
      for (int i = 1; i < N; ++i) rho += u[static_cast<size_t>(i)] * u[static_cast<size_t>(i)];
      const T inv = 1.0 / (1.0 + rho);
      for (int i = 0; i < N; ++i) x.push_back(2.0 * u[static_cast<size_t>(i)] * inv);
      x.push_back((1.0 - rho) * inv);
      return x;
    }
    T prefix(1.0);
    for (int i = 0; i < N; ++i) {
      const T& phi = u[static_cast<size_t>(i)];
      x.push_back(prefix * cos(phi));
      prefix = prefix * sin(phi);
    }
    x.push_back(prefix);
    return x;
  }

  Box default_box() const {
    Box box;
    for (int i = 0; i < N; ++i) {
      if (kind == ChartKind::stereographic) {
        box.push_back({-1.2, 1.2});
      } else if (i + 1 < N) {
        box.push_back({0.3, std::numbers::pi - 0.3});
      } else {
        box.push_back({-std::numbers::pi, std::numbers::pi});
      }
    }
    return box;
  }

  /// True when u sits on (or too near) a chart singularity.
  bool excluded(std::span<const double> u) const {
    if (kind != ChartKind::trigonometric) return false;
    for (int i = 0; i + 1 < N; ++i) {
      if (std::abs(std::sin(u[static_cast<size_t>(i)])) < kTrigGuard) return true;
    }
    return false;
  }

  /// Guard reading this chart's parameters starting at `offset` of a longer vector.
  std::vector<ExclusionGuard> guards(int offset, const std::string& label) const {
    if (kind != ChartKind::trigonometric || N < 2) return {};
    SphereChart self = *this;
    return {{label + ".trig_chart", [self, offset](std::span<const double> p) {
               return self.excluded(p.subspan(static_cast<size_t>(offset), static_cast<size_t>(self.N)));
             }}};
  }
};

}  // namespace minvar
