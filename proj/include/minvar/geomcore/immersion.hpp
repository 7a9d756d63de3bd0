#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"

namespace minvar {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned parameter box; also the default sampling region.
using Box = std::vector<Interval>;

/// A degeneracy predicate: `excluded(p)` is true where the chart must not be
/// evaluated (vanishing radii, chart singularities, degenerate metric).
struct ExclusionGuard {
  std::string name;
  std::function<bool(std::span<const double>)> excluded;
};

/// Position, Jacobian and second derivatives of an immersion at one point.
struct PointEval {
  Vec position;             // K
  Mat jacobian;             // K x n, column j = dF/du_j
  std::vector<Mat> second;  // K symmetric n x n matrices, second[c](i, j) = d2F_c/du_i du_j

  Index param_dim() const { return jacobian.cols(); }
  Index ambient_dim() const { return jacobian.rows(); }

  /// d2F/du_i du_j as an ambient vector.
  Vec second_column(Index i, Index j) const {
    Vec v(ambient_dim());
    for (Index c = 0; c < ambient_dim(); ++c) v[c] = second[static_cast<size_t>(c)](i, j);
    return v;
  }
};

/// Multi-screw data attached to helicoidal families: rotating each complex
/// block by exp(i lambda_t t) and translating the last axis by lambda0 t.
enum class BlockLayout {
  split,        // block = [Re_0..Re_N, Im_0..Im_N]
  interleaved,  // block = [Re_0, Im_0, Re_1, Im_1, ...]
};

struct ScrewTraits {
  double lambda0 = 0.0;
  std::vector<double> lambdas;  // one rotation rate per block
  BlockLayout layout = BlockLayout::split;
};

/// Structural facts a family knows about its own chart.
struct ImmersionTraits {
  std::vector<int> radial_params;  // F(s r) = s F(r) when conical
  std::optional<int> theta_param;  // the screw parameter
  std::optional<ScrewTraits> screw;
  bool conical = false;
  bool spherical = false;  // image lies in the unit sphere
  bool negative_control = false;
};

class Immersion {
 public:
  using ValueMap = std::function<std::vector<double>(std::span<const double>)>;
  using JetMap = std::function<std::vector<Jet2>(std::span<const Jet2>)>;

  Immersion(std::string name, int param_dim, int ambient_dim, Box domain, ValueMap value_map, JetMap jet_map,
            std::vector<ExclusionGuard> guards = {}, ImmersionTraits traits = {})
      : name_(std::move(name)),
        param_dim_(param_dim),
        ambient_dim_(ambient_dim),
        domain_(std::move(domain)),
        value_map_(std::move(value_map)),
        jet_map_(std::move(jet_map)),
        guards_(std::move(guards)),
        traits_(std::move(traits)) {
    if (static_cast<int>(domain_.size()) != param_dim_) {
      throw DimensionMismatch(name_ + ": domain box has " + std::to_string(domain_.size()) +
                              " intervals, expected " + std::to_string(param_dim_));
    }
  }

  const std::string& name() const { return name_; }
  int param_dim() const { return param_dim_; }
  int ambient_dim() const { return ambient_dim_; }
  const Box& domain() const { return domain_; }
  const std::vector<ExclusionGuard>& guards() const { return guards_; }
  const ImmersionTraits& traits() const { return traits_; }

  std::vector<double> position(std::span<const double> p) const {
    check_arity(p.size());
    auto out = value_map_(p);
    check_output(out.size());
    return out;
  }

  std::vector<Jet2> jets(std::span<const Jet2> p) const {
    check_arity(p.size());
    auto out = jet_map_(p);
    check_output(out.size());
    return out;
  }

  /// Name of the first guard that fires at p, if any.
  std::optional<std::string> exclusion(std::span<const double> p) const {
    check_arity(p.size());
    for (const auto& g : guards_) {
      if (g.excluded(p)) return g.name;
    }
    return std::nullopt;
  }

  PointEval evaluate(std::span<const double> p) const {
    const auto vars = seed_variables(p);
    const auto out = jets(vars);
    const Index n = param_dim_;
    const Index k = ambient_dim_;
    PointEval pe;
    pe.position.resize(k);
    pe.jacobian.resize(k, n);
    pe.second.reserve(static_cast<size_t>(k));
    for (Index c = 0; c < k; ++c) {
      const Jet2& j = out[static_cast<size_t>(c)];
      pe.position[c] = j.value;
      pe.jacobian.row(c) = j.gradient(n).transpose();
      pe.second.push_back(j.hessian(n));
    }
    return pe;
  }

  Immersion with_guard(ExclusionGuard g) const {
    Immersion copy = *this;
    copy.guards_.push_back(std::move(g));
    return copy;
  }

  Immersion with_traits(ImmersionTraits t) const {
    Immersion copy = *this;
    copy.traits_ = std::move(t);
    return copy;
  }

 private:
  void check_arity(size_t got) const {
    if (static_cast<int>(got) != param_dim_) {
      throw DimensionMismatch(name_ + ": expected " + std::to_string(param_dim_) + " parameters, got " +
                              std::to_string(got));
    }
  }
  void check_output(size_t got) const {
    if (static_cast<int>(got) != ambient_dim_) {
      throw DimensionMismatch(name_ + ": map produced " + std::to_string(got) + " coordinates, expected " +
                              std::to_string(ambient_dim_));
    }
  }

  std::string name_;
  int param_dim_;
  int ambient_dim_;
  Box domain_;
  ValueMap value_map_;
  JetMap jet_map_;
  std::vector<ExclusionGuard> guards_;
  ImmersionTraits traits_;
};

/// Wraps a map written once as `template <class T> std::vector<T> operator()(std::span<const T>)`.
template <class Map>
Immersion make_immersion(std::string name, int param_dim, int ambient_dim, Box domain, Map map,
                         std::vector<ExclusionGuard> guards = {}, ImmersionTraits traits = {}) {
  return Immersion(
      std::move(name), param_dim, ambient_dim, std::move(domain),
      [map](std::span<const double> p) { return map(p); }, [map](std::span<const Jet2> p) { return map(p); },
      std::move(guards), std::move(traits));
}

/// The immersion v -> F(A v + b). The domain becomes unbounded; guards are
/// pulled back through the affine map.
inline Immersion reparametrize(const Immersion& imm, const Mat& a, const Vec& b) {
  const int n = imm.param_dim();
  if (a.rows() != n || a.cols() != n || b.size() != n) throw DimensionMismatch("reparametrize: shape mismatch");
  auto forward = [a, b](std::span<const double> v) {
    std::vector<double> u(static_cast<size_t>(b.size()));
    for (Index i = 0; i < b.size(); ++i) {
      double s = b[i];
      for (Index j = 0; j < b.size(); ++j) s += a(i, j) * v[static_cast<size_t>(j)];
      u[static_cast<size_t>(i)] = s;
    }
    return u;
  };
  auto forward_jet = [a, b](std::span<const Jet2> v) {
    std::vector<Jet2> u;
    u.reserve(static_cast<size_t>(b.size()));
    for (Index i = 0; i < b.size(); ++i) {
      Jet2 s(b[i]);
      for (Index j = 0; j < b.size(); ++j) {
        if (a(i, j) != 0.0) s += a(i, j) * v[static_cast<size_t>(j)];
      }
      u.push_back(std::move(s));
    }
    return u;
  };
  std::vector<ExclusionGuard> guards;
  for (const auto& g : imm.guards()) {
    guards.push_back({g.name, [g, forward](std::span<const double> v) { return g.excluded(forward(v)); }});
  }
  const double inf = std::numeric_limits<double>::infinity();
  return Immersion(
      imm.name() + "/reparametrized", n, imm.ambient_dim(), Box(static_cast<size_t>(n), Interval{-inf, inf}),
      [imm, forward](std::span<const double> v) { return imm.position(forward(v)); },
      [imm, forward_jet](std::span<const Jet2> v) { return imm.jets(forward_jet(v)); }, std::move(guards));
}

/// The immersion u -> R F(u) + t for an ambient rigid motion.
inline Immersion ambient_motion(const Immersion& imm, const Mat& rotation, const Vec& translation) {
  const int k = imm.ambient_dim();
  if (rotation.rows() != k || rotation.cols() != k || translation.size() != k) {
    throw DimensionMismatch("ambient_motion: shape mismatch");
  }
  auto apply = [rotation, translation](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> y;
    y.reserve(x.size());
    for (Index i = 0; i < translation.size(); ++i) {
      T s(translation[i]);
      for (Index j = 0; j < translation.size(); ++j) {
        if (rotation(i, j) != 0.0) s += rotation(i, j) * x[static_cast<size_t>(j)];
      }
      y.push_back(std::move(s));
    }
    return y;
  };
  return Immersion(
      imm.name() + "/moved", imm.param_dim(), k, imm.domain(),
      [imm, apply](std::span<const double> p) { return apply(imm.position(p)); },
      [imm, apply](std::span<const Jet2> p) { return apply(imm.jets(p)); }, imm.guards());
}

}  // namespace minvar
