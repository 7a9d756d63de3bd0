#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"
#include "minvar/io/config.hpp"
#include "minvar/io/csv.hpp"

namespace minvar::io {

struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
};

inline std::array<int, 3> resolve_projection(const MeshConfig& m, int ambient_dim) {
  const std::array<int, 3> proj = m.projection ? *m.projection : std::array<int, 3>{0, 1, ambient_dim - 1};
  for (int k : proj) {
    if (k < 0 || k >= ambient_dim) {
      throw DimensionMismatch("mesh.projection: index " + std::to_string(k) + " outside ambient dimension " +
                              std::to_string(ambient_dim));
    }
  }
  return proj;
}

/// Regular grid tessellation, row-major in (params[0], params[1]); each grid
/// quad becomes two triangles.
inline TriangleMesh tessellate(const Immersion& imm, const MeshConfig& m) {
  const int n = imm.param_dim();
  for (int k : m.params) {
    if (k < 0 || k >= n) {
      throw DimensionMismatch("mesh.params: index " + std::to_string(k) + " outside parameter dimension " +
                              std::to_string(n));
    }
  }
  const auto proj = resolve_projection(m, imm.ambient_dim());
  std::vector<double> p(static_cast<size_t>(n));
  if (!m.fixed.empty()) {
    if (static_cast<int>(m.fixed.size()) != n) {
      throw DimensionMismatch("mesh.fixed: has " + std::to_string(m.fixed.size()) + " entries but the family has " +
                              std::to_string(n) + " parameters");
    }
    p = m.fixed;
  } else {
    for (int k = 0; k < n; ++k) p[static_cast<size_t>(k)] = imm.domain()[static_cast<size_t>(k)].mid();
  }
  std::array<Interval, 2> range{};
  for (int a = 0; a < 2; ++a) {
    range[static_cast<size_t>(a)] = m.box.empty() ? imm.domain()[static_cast<size_t>(m.params[static_cast<size_t>(a)])]
                                                   : m.box[static_cast<size_t>(a)];
    const auto& iv = range[static_cast<size_t>(a)];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw SpecError("mesh.box: needed for an unbounded parameter");
  }
  if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) {
    throw SpecError("mesh.fixed: needed when the domain is unbounded");
  }

  const int nu = m.grid[0];
  const int nv = m.grid[1];
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(nu) * static_cast<size_t>(nv));
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      p[static_cast<size_t>(m.params[0])] = range[0].lo + (range[0].hi - range[0].lo) * i / (nu - 1);
      p[static_cast<size_t>(m.params[1])] = range[1].lo + (range[1].hi - range[1].lo) * j / (nv - 1);
      const auto x = imm.position(p);
      mesh.vertices.push_back({x[static_cast<size_t>(proj[0])], x[static_cast<size_t>(proj[1])],
                               x[static_cast<size_t>(proj[2])]});
    }
  }
  const auto at = [nv](int i, int j) { return i * nv + j; };
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      mesh.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      mesh.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return mesh;
}

/// Wavefront OBJ with v and f records only.
inline std::string to_obj(const TriangleMesh& mesh) {
  std::string out;
  for (const auto& v : mesh.vertices) {
    out += "v " + format_double(v[0]) + ' ' + format_double(v[1]) + ' ' + format_double(v[2]) + '\n';
  }
  for (const auto& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' + std::to_string(f[2] + 1) + '\n';
  }
  return out;
}

}  // namespace minvar::io
