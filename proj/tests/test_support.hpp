#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "minvar/geomcore/immersion.hpp"
#include "minvar/rng.hpp"

namespace minvar::testing {

/// Draws a non-excluded point uniformly from the immersion's domain box (or
/// from `box` when given).
inline std::vector<double> sample_point(const Immersion& imm, RandomStream& rng, const Box& box = {}) {
  const Box& b = box.empty() ? imm.domain() : box;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> p;
    for (const auto& iv : b) {
      const double lo = std::isfinite(iv.lo) ? iv.lo : -2.0;
      const double hi = std::isfinite(iv.hi) ? iv.hi : 2.0;
      p.push_back(rng.uniform(lo, hi));
    }
    if (!imm.exclusion(p)) return p;
  }
  throw std::runtime_error("no admissible point in box");
}

inline double rel_diff(const Vec& a, const Vec& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace minvar::testing
