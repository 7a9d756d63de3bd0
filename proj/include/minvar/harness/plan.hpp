#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"
#include "minvar/rng.hpp"

namespace minvar {

/// Where and how many points a campaign evaluates. An empty box means the
/// immersion's own domain.
struct SamplePlan {
  int count = 1000;
  std::uint64_t seed = 1;
  Box box;
  int max_rejects = 1000;              // consecutive exclusions before giving up on a point
  double max_excluded_fraction = 0.5;  // of all draws

  void validate() const {
    if (count < 1) throw SpecError("plan.count must be >= 1");
    if (max_rejects < 1) throw SpecError("plan.max_rejects must be >= 1");
    if (!(max_excluded_fraction > 0.0 && max_excluded_fraction <= 1.0)) {
      throw SpecError("plan.max_excluded_fraction must lie in (0, 1]");
    }
    for (const auto& iv : box) {
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo <= iv.hi)) {
        throw SpecError("plan.box intervals must be finite with lo <= hi");
      }
    }
  }
};

struct TolerancePolicy {
  double tol_H = 1e-8;
  double tol_identity = 1e-9;
  double tol_negative = 1e-2;
  double tol_symmetry = 1e-12;
  double tol_cross = 1e-7;  // closed forms against the generic operator

  void validate() const {
    if (!(tol_H > 0.0) || !(tol_identity > 0.0) || !(tol_negative > 0.0) || !(tol_symmetry > 0.0) ||
        !(tol_cross > 0.0)) {
      throw SpecError("tolerances must be positive");
    }
    if (tol_negative < 1e3 * tol_H) throw SpecError("tol_negative must exceed tol_H by at least 1e3");
  }
};

struct SampleSet {
  std::vector<std::vector<double>> points;
  long long excluded = 0;
};

/// Rejection sampling with one random stream per point index, so point i is
/// the same whatever order (or thread) produces it. `salt` separates the
/// draws of different campaigns sharing a seed.
inline SampleSet sample_points(const Immersion& imm, const SamplePlan& plan, std::uint64_t salt = 0) {
  plan.validate();
  const Box& box = plan.box.empty() ? imm.domain() : plan.box;
  if (static_cast<int>(box.size()) != imm.param_dim()) {
    throw DimensionMismatch("plan.box has " + std::to_string(box.size()) + " intervals, " + imm.name() + " has " +
                            std::to_string(imm.param_dim()) + " parameters");
  }
  for (const auto& iv : box) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw SpecError(imm.name() + ": sampling box must be finite; give plan.box");
    }
  }
  SampleSet out;
  out.points.reserve(static_cast<size_t>(plan.count));
  std::vector<double> p(box.size());
  for (int i = 0; i < plan.count; ++i) {
    RandomStream rng = RandomStream::split(plan.seed, static_cast<std::uint64_t>(i), salt);
    int rejects = 0;
    while (true) {
      for (size_t k = 0; k < box.size(); ++k) p[k] = rng.uniform(box[k].lo, box[k].hi);
      if (!imm.exclusion(p)) break;
      ++out.excluded;
      if (++rejects >= plan.max_rejects) {
        throw SamplingExhausted(imm.name() + ": " + std::to_string(rejects) +
                                " consecutive excluded draws at point " + std::to_string(i));
      }
    }
    out.points.push_back(p);
  }
  const double total = static_cast<double>(out.excluded) + plan.count;
  if (static_cast<double>(out.excluded) / total >= plan.max_excluded_fraction) {
    throw SamplingExhausted(imm.name() + ": " + std::to_string(out.excluded) + " of " +
                            std::to_string(static_cast<long long>(total)) + " draws excluded");
  }
  return out;
}

}  // namespace minvar
