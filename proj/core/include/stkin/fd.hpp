#pragma once

// Central finite differences along chart axes. Used as the fallback when a
// field carries no analytic derivative, and by the relative-form code, which
// deliberately differentiates in observer coordinates only (so that the
// relative path never reuses the absolute path's derivatives).

#include <cmath>
#include <type_traits>

#include "stkin/spacetime.hpp"

namespace stkin {

struct FdConfig {
  /// Relative step: the actual step along an axis is h * max(1, |coord|).
  double h = 1e-5;
};

namespace fd {

inline double step_for(double h, double coord) {
  return h * std::max(1.0, std::abs(coord));
}

/// Shift a point along a chart axis (0 = t, 1..3 = x, y, z).
inline WorldPoint shifted(const WorldPoint& x, int axis, double d) {
  WorldPoint y = x;
  if (axis == 0) {
    y.t += d;
  } else {
    y.q[axis - 1] += d;
  }
  return y;
}

inline double coord_of(const WorldPoint& x, int axis) {
  return axis == 0 ? x.t : x.q[axis - 1];
}

/// Central difference of an evaluator F: WorldPoint -> T along a chart axis,
/// where T is double or a fixed-size Eigen type.
template <typename F>
auto central(const F& f, const WorldPoint& x, int axis, double h) {
  using T = std::invoke_result_t<F, const WorldPoint&>;
  const double d = step_for(h, coord_of(x, axis));
  T plus = f(shifted(x, axis, +d));
  T minus = f(shifted(x, axis, -d));
  T result = (1.0 / (2.0 * d)) * (plus - minus);
  return result;
}

}  // namespace fd
}  // namespace stkin
