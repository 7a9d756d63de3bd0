#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/geomcore/immersion.hpp"

namespace minvar {

/// Pitch vector (lambda0; lambda_1..lambda_L): translation rate of the last
/// axis and one rotation rate per complex block.
struct PitchVector {
  double lambda0 = 0.0;
  std::vector<double> lambdas;

  int L() const { return static_cast<int>(lambdas.size()); }

  void validate(int expected_l = -1) const {
    if (lambdas.empty()) throw SpecError("pitch vector: lambdas must have length L >= 1");
    if (expected_l >= 0 && L() != expected_l) {
      throw SpecError("pitch vector: lambdas has length " + std::to_string(L()) + " but L = " +
                      std::to_string(expected_l));
    }
  }

  friend bool operator==(const PitchVector&, const PitchVector&) = default;
};

/// Rotates one complex block by the angle (cos a, sin a) in place.
template <class T>
void rotate_block(std::span<T> block, const T& c, const T& s, BlockLayout layout) {
  const size_t m = block.size() / 2;
  for (size_t k = 0; k < m; ++k) {
    const size_t re = layout == BlockLayout::split ? k : 2 * k;
    const size_t im = layout == BlockLayout::split ? m + k : 2 * k + 1;
    const T x = block[re];
    const T y = block[im];
    block[re] = c * x - s * y;
    block[im] = s * x + c * y;
  }
}

/// The multi-screw motion: block b of q is multiplied by exp(i lambda_b t)
/// and the last coordinate is shifted by lambda0 t.
inline std::vector<double> screw_action(const PitchVector& pitch, double t, std::span<const double> q,
                                        BlockLayout layout = BlockLayout::split) {
  pitch.validate();
  const auto l = static_cast<size_t>(pitch.L());
  if (q.empty() || (q.size() - 1) % l != 0 || ((q.size() - 1) / l) % 2 != 0 || q.size() < 1 + 2 * l) {
    throw DimensionMismatch("screw_action: ambient dimension " + std::to_string(q.size()) +
                            " is not L(2N+2)+1 for L = " + std::to_string(l));
  }
  const size_t width = (q.size() - 1) / l;
  std::vector<double> out(q.begin(), q.end());
  for (size_t b = 0; b < l; ++b) {
    const double a = pitch.lambdas[b] * t;
    rotate_block<double>(std::span<double>(out).subspan(b * width, width), std::cos(a), std::sin(a), layout);
  }
  out.back() += pitch.lambda0 * t;
  return out;
}

inline std::vector<double> screw_action(const ScrewTraits& screw, double t, std::span<const double> q) {
  return screw_action(PitchVector{screw.lambda0, screw.lambdas}, t, q, screw.layout);
}

}  // namespace minvar
