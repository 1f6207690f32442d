#pragma once

// Catmull-Rom cubic interpolation helpers shared by the transform kernels.

#include <array>
#include <cmath>
#include <vector>

#include "tomokit/grid.hpp"

namespace tomokit::detail {

/// Weights for the 4-point Catmull-Rom stencil at fractional offset fr in
/// [0,1) relative to the second point.
inline std::array<double, 4> catmull_weights(double fr) {
  const double f2 = fr * fr;
  const double f3 = f2 * fr;
  return {-0.5 * f3 + f2 - 0.5 * fr, 1.5 * f3 - 2.5 * f2 + 1.0,
          -1.5 * f3 + 2.0 * f2 + 0.5 * fr, 0.5 * f3 - 0.5 * f2};
}

/// Cubic sample of v (spacing implied by fractional index fi); out-of-range
/// points read as zero.
template <typename T>
T cubic_sample(const std::vector<T>& v, double fi) {
  const int n = static_cast<int>(v.size());
  const int i0 = static_cast<int>(std::floor(fi));
  const auto w = catmull_weights(fi - i0);
  T acc{};
  for (int a = 0; a < 4; ++a) {
    const int idx = i0 + a - 1;
    if (idx >= 0 && idx < n) acc += w[a] * v[idx];
  }
  return acc;
}

/// Cubic sample on a Grid1D-backed field, zero outside the grid.
template <typename T>
T cubic_sample(const SampledField1D<T>& f, double x) {
  return cubic_sample(f.values, f.grid.index(x));
}

}  // namespace tomokit::detail
