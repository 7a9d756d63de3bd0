#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/families/clifford.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/families/screw.hpp"
#include "minvar/families/sphere_chart.hpp"
#include "minvar/geomcore/immersion.hpp"

namespace minvar {

/// Guard thresholds: vanishing radii and vanishing P (the squared normal
/// component of the screw direction).
inline constexpr double kEpsR = 1e-3;
inline constexpr double kEpsP = 1e-6;

inline constexpr Interval kRadialBox{0.25, 2.0};
inline constexpr Interval kThetaBox{-std::numbers::pi, std::numbers::pi};

namespace detail {

template <class S>
using elem_t = std::remove_cv_t<typename S::element_type>;

template <class T>
std::vector<T> eval_base(const Immersion& base, std::span<const T> p) {
  if constexpr (std::is_same_v<T, double>) {
    return base.position(p);
  } else {
    return base.jets(p);
  }
}

/// D.JC of one Clifford block at a chart point.
inline double d_dot_jc(const CliffordBlock& b, std::span<const double> u) {
  const auto c = b.point<double>(u);
  const auto d = b.normal<double>(u);
  const auto jc = apply_j(c);
  double s = 0.0;
  for (size_t i = 0; i < c.size(); ++i) s += d[i] * jc[i];
  return s;
}

inline ExclusionGuard radius_guard(std::vector<int> idx, const std::string& label = "radius") {
  return {label, [idx](std::span<const double> p) {
            for (int i : idx) {
              if (std::abs(p[static_cast<size_t>(i)]) <= kEpsR) return true;
            }
            return false;
          }};
}

inline std::vector<int> iota(int from, int count) {
  std::vector<int> v;
  for (int i = 0; i < count; ++i) v.push_back(from + i);
  return v;
}

inline void append(std::vector<ExclusionGuard>& to, std::vector<ExclusionGuard> from) {
  for (auto& g : from) to.push_back(std::move(g));
}

inline void append(Box& to, const Box& from) { to.insert(to.end(), from.begin(), from.end()); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw SpecError(msg);
}

inline void validate_blocks(const std::vector<CliffordBlock>& blocks, int l) {
  require(static_cast<int>(blocks.size()) == l,
          "blocks has length " + std::to_string(blocks.size()) + " but L = " + std::to_string(l));
  for (const auto& b : blocks) {
    b.validate();
    require(b.N == blocks.front().N, "all blocks must share the same N");
  }
}

/// Multiplies a split-layout block by r e^(i a).
template <class T>
void push_rotated(std::vector<T>& out, const std::vector<T>& c, const T& r, const T& cs, const T& sn) {
  const size_t m = c.size() / 2;
  for (size_t k = 0; k < m; ++k) out.push_back(r * (cs * c[k] - sn * c[m + k]));
  for (size_t k = 0; k < m; ++k) out.push_back(r * (sn * c[k] + cs * c[m + k]));
}

}  // namespace detail

inline Immersion build_immersion(const FamilySpec& spec);

namespace detail {

inline Immersion build(const CliffordTorusSpec& s) {
  s.block.validate();
  const int n = s.block.param_dim();
  ImmersionTraits tr;
  tr.spherical = true;
  const CliffordBlock b = s.block;
  return make_immersion(
      "CliffordTorus(N=" + std::to_string(b.N) + ")", n, b.ambient_dim(), b.default_box(),
      [b](auto p) { return b.point<elem_t<decltype(p)>>(p); }, b.guards(0, "block"), tr);
}

inline Immersion build(const CliffordConeSpec& s) {
  s.block.validate();
  const CliffordBlock b = s.block;
  const int n = b.param_dim() + 1;
  Box box = b.default_box();
  box.push_back(kRadialBox);
  auto guards = b.guards(0, "block");
  guards.push_back(radius_guard({n - 1}));
  ImmersionTraits tr;
  tr.conical = true;
  tr.radial_params = {n - 1};
  return make_immersion(
      "CliffordCone(N=" + std::to_string(b.N) + ")", n, b.ambient_dim(), box,
      [b](auto p) {
        using T = elem_t<decltype(p)>;
        const auto np = static_cast<size_t>(b.param_dim());
        auto c = b.point<T>(p.first(np));
        for (auto& x : c) x = p[np] * x;
        return c;
      },
      std::move(guards), tr);
}

/// Shared by LRaysCone and LRaysCliffordCone: Phi(u, r) = (r_1 F(u), ..., r_L F(u)).
inline Immersion rays_over(const Immersion& base, int l, const std::string& name) {
  require(l >= 1, "L must be >= 1");
  require(base.traits().spherical, "L-rays cone base must lie in the unit sphere");
  const int m = base.param_dim();
  const int k = base.ambient_dim();
  Box box = base.domain();
  for (int t = 0; t < l; ++t) box.push_back(kRadialBox);
  auto guards = base.guards();
  guards.push_back(radius_guard(iota(m, l)));
  ImmersionTraits tr;
  tr.conical = true;
  tr.radial_params = iota(m, l);
  tr.negative_control = base.traits().negative_control;
  return make_immersion(
      name, m + l, l * k, box,
      [base, m, l](auto p) {
        using T = elem_t<decltype(p)>;
        const auto f = eval_base<T>(base, p.first(static_cast<size_t>(m)));
        std::vector<T> out;
        out.reserve(f.size() * static_cast<size_t>(l));
        for (int t = 0; t < l; ++t) {
          const T& r = p[static_cast<size_t>(m + t)];
          for (const auto& x : f) out.push_back(r * x);
        }
        return out;
      },
      std::move(guards), tr);
}

inline Immersion build(const LRaysConeSpec& s) {
  require(s.base != nullptr, "LRaysCone requires a base family");
  const Immersion base = build_immersion(*s.base);
  return rays_over(base, s.L, "LRaysCone(L=" + std::to_string(s.L) + ", " + base.name() + ")");
}

inline Immersion build(const LRaysCliffordConeSpec& s) {
  const Immersion base = build(CliffordTorusSpec{s.block});
  return rays_over(base, s.L, "LRaysCliffordCone(L=" + std::to_string(s.L) + ",N=" + std::to_string(s.block.N) + ")");
}

inline Immersion build(const SphericalJoinSpec& s) {
  require(s.L >= 1, "L must be >= 1");
  require(s.base != nullptr, "SphericalJoin requires a base family");
  const Immersion base = build_immersion(*s.base);
  require(base.traits().spherical, "SphericalJoin base must lie in the unit sphere");
  const int m = base.param_dim();
  const int k = base.ambient_dim();
  const int l = s.L;
  const SphereChart xs{l - 1, s.xs_chart, 1};
  Box box = base.domain();
  append(box, xs.default_box());
  auto guards = base.guards();
  append(guards, xs.guards(m, "xs"));
  ImmersionTraits tr;
  tr.spherical = true;
  tr.negative_control = base.traits().negative_control;
  return make_immersion(
      "SphericalJoin(L=" + std::to_string(l) + ", " + base.name() + ")", m + l - 1, l * k, box,
      [base, xs, m, l](auto p) {
        using T = elem_t<decltype(p)>;
        const auto f = eval_base<T>(base, p.first(static_cast<size_t>(m)));
        const auto x = xs(p.subspan(static_cast<size_t>(m), static_cast<size_t>(l - 1)));
        std::vector<T> out;
        out.reserve(f.size() * static_cast<size_t>(l));
        for (int t = 0; t < l; ++t) {
          for (const auto& v : f) out.push_back(x[static_cast<size_t>(t)] * v);
        }
        return out;
      },
      std::move(guards), tr);
}

inline Immersion build(const GenHelicoidASpec& s) {
  s.pitch.validate();
  const int l = s.pitch.L();
  validate_blocks(s.blocks, l);
  const int nn = s.blocks.front().N;
  const int w = 2 * nn;
  const int theta = w * l;
  const int n = w * l + 1 + l;
  const int k = l * (2 * nn + 2) + 1;

  Box box;
  std::vector<ExclusionGuard> guards;
  for (int t = 0; t < l; ++t) {
    append(box, s.blocks[static_cast<size_t>(t)].default_box());
    append(guards, s.blocks[static_cast<size_t>(t)].guards(t * w, "block" + std::to_string(t + 1)));
  }
  box.push_back(kThetaBox);
  for (int t = 0; t < l; ++t) box.push_back(kRadialBox);
  guards.push_back(radius_guard(iota(theta + 1, l)));
  const PitchVector pitch = s.pitch;
  const auto blocks = s.blocks;
  guards.push_back({"P", [pitch, blocks, w, theta](std::span<const double> p) {
                      double big_p = pitch.lambda0 * pitch.lambda0;
                      for (size_t t = 0; t < blocks.size(); ++t) {
                        const double a = d_dot_jc(blocks[t], p.subspan(t * static_cast<size_t>(w), static_cast<size_t>(w)));
                        const double lr = pitch.lambdas[t] * p[static_cast<size_t>(theta) + 1 + t];
                        big_p += lr * lr * a * a;
                      }
                      return big_p <= kEpsP;
                    }});

  ImmersionTraits tr;
  tr.theta_param = theta;
  tr.radial_params = iota(theta + 1, l);
  tr.screw = ScrewTraits{pitch.lambda0, pitch.lambdas, BlockLayout::split};
  tr.conical = pitch.lambda0 == 0.0;

  return make_immersion(
      "GenHelicoidA(L=" + std::to_string(l) + ",N=" + std::to_string(nn) + ")", n, k, box,
      [pitch, blocks, w, theta](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        const T& th = p[static_cast<size_t>(theta)];
        std::vector<T> out;
        for (size_t t = 0; t < blocks.size(); ++t) {
          const auto c = blocks[t].point<T>(p.subspan(t * static_cast<size_t>(w), static_cast<size_t>(w)));
          const T a = pitch.lambdas[t] * th;
          push_rotated<T>(out, c, p[static_cast<size_t>(theta) + 1 + t], cos(a), sin(a));
        }
        out.push_back(pitch.lambda0 * th);
        return out;
      },
      std::move(guards), tr);
}

inline Immersion build(const GenHelicoidBSpec& s) {
  require(s.L >= 1, "L must be >= 1");
  s.block.validate();
  const CliffordBlock b = s.block;
  const int l = s.L;
  const int w = b.param_dim();
  const int theta = w;
  const int n = w + 1 + l;
  const int k = l * b.ambient_dim() + 1;
  Box box = b.default_box();
  box.push_back(kThetaBox);
  for (int t = 0; t < l; ++t) box.push_back(kRadialBox);
  auto guards = b.guards(0, "block");
  guards.push_back(radius_guard(iota(theta + 1, l)));
  const double lambda = s.lambda;
  const double lambda0 = s.lambda0;
  guards.push_back({"P", [b, lambda, lambda0, w, l](std::span<const double> p) {
                      const double a = d_dot_jc(b, p.first(static_cast<size_t>(w)));
                      double rr = 0.0;
                      for (int t = 0; t < l; ++t) rr += p[static_cast<size_t>(w + 1 + t)] * p[static_cast<size_t>(w + 1 + t)];
                      return lambda0 * lambda0 + lambda * lambda * rr * a * a <= kEpsP;
                    }});
  ImmersionTraits tr;
  tr.theta_param = theta;
  tr.radial_params = iota(theta + 1, l);
  tr.screw = ScrewTraits{lambda0, std::vector<double>(static_cast<size_t>(l), lambda), BlockLayout::split};
  tr.conical = lambda0 == 0.0;
  return make_immersion(
      "GenHelicoidB(L=" + std::to_string(l) + ",N=" + std::to_string(b.N) + ")", n, k, box,
      [b, lambda, lambda0, w, l](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        const T& th = p[static_cast<size_t>(w)];
        const auto c = b.point<T>(p.first(static_cast<size_t>(w)));
        const T a = lambda * th;
        const T cs = cos(a);
        const T sn = sin(a);
        std::vector<T> out;
        for (int t = 0; t < l; ++t) push_rotated<T>(out, c, p[static_cast<size_t>(w + 1 + t)], cs, sn);
        out.push_back(lambda0 * th);
        return out;
      },
      std::move(guards), tr);
}

/// Chart (v_X, v_Y, Theta, rho) with (p + i q) = rho (X + i Y) / sqrt2, X, Y in
/// S^(N-1), written in interleaved (x1, y1, ..., xN, yN, z) coordinates.
inline Immersion build(const ChoeHoppeSpec& s) {
  require(s.N >= 1, "ChoeHoppe requires N >= 1");
  const int nn = s.N;
  const SphereChart cx{nn - 1, s.chart, s.branch_x};
  const SphereChart cy{nn - 1, s.chart, s.branch_y};
  cx.validate();
  cy.validate();
  const int m = nn - 1;
  const int theta = 2 * m;
  const int n = 2 * nn;
  Box box = cx.default_box();
  append(box, cy.default_box());
  box.push_back(kThetaBox);
  box.push_back(kRadialBox);
  auto guards = cx.guards(0, "X");
  append(guards, cy.guards(m, "Y"));
  guards.push_back(radius_guard({theta + 1}));
  const double lambda = s.lambda;
  guards.push_back({"P", [cx, cy, m, theta, lambda](std::span<const double> p) {
                      const auto x = cx(p.first(static_cast<size_t>(m)));
                      const auto y = cy(p.subspan(static_cast<size_t>(m), static_cast<size_t>(m)));
                      double xy = 0.0;
                      for (size_t i = 0; i < x.size(); ++i) xy += x[i] * y[i];
                      const double rho = p[static_cast<size_t>(theta) + 1];
                      return lambda * lambda + rho * rho * xy * xy <= kEpsP;
                    }});
  ImmersionTraits tr;
  tr.theta_param = theta;
  tr.radial_params = {theta + 1};
  tr.screw = ScrewTraits{lambda, {1.0}, BlockLayout::interleaved};
  tr.conical = lambda == 0.0;
  return make_immersion(
      "ChoeHoppe(N=" + std::to_string(nn) + ")", n, 2 * nn + 1, box,
      [cx, cy, m, theta, lambda](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        const auto x = cx(p.first(static_cast<size_t>(m)));
        const auto y = cy(p.subspan(static_cast<size_t>(m), static_cast<size_t>(m)));
        const T& th = p[static_cast<size_t>(theta)];
        const T s2 = p[static_cast<size_t>(theta) + 1] * (1.0 / std::numbers::sqrt2);
        const T cs = cos(th);
        const T sn = sin(th);
        std::vector<T> out;
        for (size_t i = 0; i < x.size(); ++i) {
          const T pk = s2 * x[i];
          const T qk = s2 * y[i];
          out.push_back(pk * cs - qk * sn);
          out.push_back(qk * cs + pk * sn);
        }
        out.push_back(lambda * th);
        return out;
      },
      std::move(guards), tr);
}

/// Chart (Theta, r_1, ..., r_L).
inline Immersion build(const BdjSpec& s) {
  s.pitch.validate();
  const int l = s.pitch.L();
  Box box{kThetaBox};
  for (int t = 0; t < l; ++t) box.push_back(kRadialBox);
  const PitchVector pitch = s.pitch;
  std::vector<ExclusionGuard> guards{radius_guard(iota(1, l))};
  guards.push_back({"P", [pitch](std::span<const double> p) {
                      double big_p = pitch.lambda0 * pitch.lambda0;
                      for (size_t t = 0; t < pitch.lambdas.size(); ++t) {
                        const double lr = pitch.lambdas[t] * p[1 + t];
                        big_p += lr * lr;
                      }
                      return big_p <= kEpsP;
                    }});
  ImmersionTraits tr;
  tr.theta_param = 0;
  tr.radial_params = iota(1, l);
  tr.screw = ScrewTraits{pitch.lambda0, pitch.lambdas, BlockLayout::split};
  tr.conical = pitch.lambda0 == 0.0;
  return make_immersion(
      "BDJ(L=" + std::to_string(l) + ")", l + 1, 2 * l + 1, box,
      [pitch](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        std::vector<T> out;
        for (size_t t = 0; t < pitch.lambdas.size(); ++t) {
          const T a = pitch.lambdas[t] * p[0];
          out.push_back(p[1 + t] * cos(a));
          out.push_back(p[1 + t] * sin(a));
        }
        out.push_back(pitch.lambda0 * p[0]);
        return out;
      },
      std::move(guards), tr);
}

/// Chart (t, Theta).
inline Immersion build(const LawsonSurfaceSpec& s) {
  require(s.lambda1 != 0.0 || s.lambda2 != 0.0, "LawsonSurface requires (lambda1, lambda2) != (0, 0)");
  const double l1 = s.lambda1;
  const double l2 = s.lambda2;
  ImmersionTraits tr;
  tr.spherical = true;
  tr.theta_param = 1;
  tr.screw = ScrewTraits{0.0, {l1, l2}, BlockLayout::split};
  std::vector<ExclusionGuard> guards{{"P", [l1, l2](std::span<const double> p) {
    const double c = std::cos(p[0]);
    const double sn = std::sin(p[0]);
    return l1 * l1 * c * c + l2 * l2 * sn * sn <= kEpsP;
  }}};
  return make_immersion(
      "LawsonSurface", 2, 4, Box{{0.05, std::numbers::pi / 2 - 0.05}, kThetaBox},
      [l1, l2](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        const T ct = cos(p[0]);
        const T st = sin(p[0]);
        const T a = l1 * p[1];
        const T b = l2 * p[1];
        return std::vector<T>{ct * cos(a), ct * sin(a), st * cos(b), st * sin(b)};
      },
      std::move(guards), tr);
}

/// Chart (u_X, u_Y, r_1, r_2) with unit X, Y in S^N.
inline Immersion build(const HarveyLawsonConeSpec& s) {
  require(s.N >= 0, "HarveyLawsonCone requires N >= 0");
  const int nn = s.N;
  const SphereChart cx{nn, s.chart, 1};
  const SphereChart cy{nn, s.chart, 1};
  Box box = cx.default_box();
  append(box, cy.default_box());
  box.push_back(kRadialBox);
  box.push_back(kRadialBox);
  auto guards = cx.guards(0, "X");
  append(guards, cy.guards(nn, "Y"));
  guards.push_back(radius_guard({2 * nn, 2 * nn + 1}));
  ImmersionTraits tr;
  tr.conical = true;
  tr.radial_params = {2 * nn, 2 * nn + 1};
  return make_immersion(
      "HarveyLawsonCone(N=" + std::to_string(nn) + ")", 2 * nn + 2, 4 * nn + 4, box,
      [cx, cy, nn](auto p) {
        using T = elem_t<decltype(p)>;
        const auto x = cx(p.first(static_cast<size_t>(nn)));
        const auto y = cy(p.subspan(static_cast<size_t>(nn), static_cast<size_t>(nn)));
        std::vector<T> out;
        for (int t = 0; t < 2; ++t) {
          const T& r = p[static_cast<size_t>(2 * nn + t)];
          for (const auto& v : x) out.push_back(r * v);
          for (const auto& v : y) out.push_back(r * v);
        }
        return out;
      },
      std::move(guards), tr);
}

/// Chart (u^1, ..., u^L, Theta, chart of p in S^(L-1)).
inline Immersion build(const SphericalSliceSpec& s) {
  const auto& in = s.inner;
  in.pitch.validate();
  require(in.pitch.lambda0 == 0.0, "SphericalSlice requires lambda0 = 0");
  const int l = in.pitch.L();
  validate_blocks(in.blocks, l);
  const int nn = in.blocks.front().N;
  const int w = 2 * nn;
  const int theta = w * l;
  const SphereChart pc{l - 1, s.p_chart, 1};
  Box box;
  std::vector<ExclusionGuard> guards;
  for (int t = 0; t < l; ++t) {
    append(box, in.blocks[static_cast<size_t>(t)].default_box());
    append(guards, in.blocks[static_cast<size_t>(t)].guards(t * w, "block" + std::to_string(t + 1)));
  }
  box.push_back(kThetaBox);
  append(box, pc.default_box());
  append(guards, pc.guards(theta + 1, "p"));
  const auto lambdas = in.pitch.lambdas;
  const auto blocks = in.blocks;
  guards.push_back({"radius", [pc, theta, l](std::span<const double> p) {
                      const auto ps = pc(p.subspan(static_cast<size_t>(theta) + 1, static_cast<size_t>(l - 1)));
                      for (double v : ps) {
                        if (std::abs(v) <= kEpsR) return true;
                      }
                      return false;
                    }});
  guards.push_back({"P", [pc, lambdas, blocks, w, theta, l](std::span<const double> p) {
                      const auto ps = pc(p.subspan(static_cast<size_t>(theta) + 1, static_cast<size_t>(l - 1)));
                      double big_p = 0.0;
                      for (size_t t = 0; t < blocks.size(); ++t) {
                        const double a = d_dot_jc(blocks[t], p.subspan(t * static_cast<size_t>(w), static_cast<size_t>(w)));
                        const double lp = lambdas[t] * ps[t];
                        big_p += lp * lp * a * a;
                      }
                      return big_p <= kEpsP;
                    }});
  ImmersionTraits tr;
  tr.spherical = true;
  tr.theta_param = theta;
  tr.screw = ScrewTraits{0.0, lambdas, BlockLayout::split};
  return make_immersion(
      "SphericalSlice(L=" + std::to_string(l) + ",N=" + std::to_string(nn) + ")", w * l + l, l * (w + 2), box,
      [pc, lambdas, blocks, w, theta, l](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        const T& th = p[static_cast<size_t>(theta)];
        const auto ps = pc(p.subspan(static_cast<size_t>(theta) + 1, static_cast<size_t>(l - 1)));
        std::vector<T> out;
        for (size_t t = 0; t < blocks.size(); ++t) {
          const auto c = blocks[t].point<T>(p.subspan(t * static_cast<size_t>(w), static_cast<size_t>(w)));
          const T a = lambdas[t] * th;
          push_rotated<T>(out, c, ps[t], cos(a), sin(a));
        }
        return out;
      },
      std::move(guards), tr);
}

inline Immersion build(const LatitudeCircleSpec& s) {
  require(std::abs(s.height) < 1.0, "LatitudeCircle height must lie in (-1, 1)");
  const double h = s.height;
  const double rad = std::sqrt(1.0 - h * h);
  ImmersionTraits tr;
  tr.spherical = true;
  tr.negative_control = h != 0.0;
  return make_immersion(
      "LatitudeCircle(h=" + std::to_string(h) + ")", 1, 3, Box{kThetaBox},
      [h, rad](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        return std::vector<T>{rad * cos(p[0]), rad * sin(p[0]), T(h)};
      },
      {}, tr);
}

/// Chart (phi, z).
inline Immersion build(const RoundCylinderSpec& s) {
  require(s.radius > 0.0, "RoundCylinder radius must be positive");
  const double r = s.radius;
  ImmersionTraits tr;
  tr.negative_control = true;
  return make_immersion(
      "RoundCylinder", 2, 3, Box{kThetaBox, {-1.0, 1.0}},
      [r](auto p) {
        using T = elem_t<decltype(p)>;
        using std::cos;
        using std::sin;
        return std::vector<T>{r * cos(p[0]), r * sin(p[0]), p[1]};
      },
      {}, tr);
}

inline Immersion build(const UnitSphereSpec& s) {
  require(s.N >= 1, "UnitSphere requires N >= 1");
  const SphereChart c{s.N, s.chart, 1};
  ImmersionTraits tr;
  tr.spherical = true;
  return make_immersion(
      "UnitSphere(N=" + std::to_string(s.N) + ")", s.N, s.N + 1, c.default_box(),
      [c](auto p) { return c(p); }, c.guards(0, "chart"), tr);
}

}  // namespace detail

/// Builds the immersion described by `spec`; throws SpecError on malformed specs.
inline Immersion build_immersion(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return detail::build(s); }, spec.value);
}

}  // namespace minvar
