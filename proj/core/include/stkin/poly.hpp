#pragma once

// Multivariate polynomials in the chart coordinates (t, x, y, z), used as
// smooth test fields with exact partial derivatives. Derivative checks in
// the test harness compare finite-difference and flow-pullback values
// against closed forms built from these exact partials.

#include <array>
#include <random>
#include <vector>

#include "stkin/spacetime.hpp"

namespace stkin {

class Poly4 {
 public:
  /// One monomial: coef * t^e[0] * x^e[1] * y^e[2] * z^e[3].
  struct Term {
    double coef = 0.0;
    std::array<int, 4> e{0, 0, 0, 0};
  };

  Poly4() = default;
  explicit Poly4(std::vector<Term> terms);

  static Poly4 constant(double c);
  /// The coordinate function itself; axis in chart order 0=t, 1=x, 2=y, 3=z.
  static Poly4 coordinate(int axis);

  /// Dense random polynomial of total degree <= 3 (35 monomials) with
  /// coefficients drawn uniformly from [-scale, scale). The default scale
  /// keeps third derivatives O(10) on the test box |t|,|q| <= 2, so that
  /// O(s^2) pullback truncation stays well below check tolerances.
  static Poly4 random_cubic(std::mt19937_64& rng, double scale = 0.1);

  double operator()(const WorldPoint& x) const;

  /// Exact partial derivative with respect to a chart axis (0=t..3=z).
  Poly4 partial(int axis) const;

  Poly4 operator+(const Poly4& o) const;
  Poly4 operator*(double s) const;

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
};

}  // namespace stkin
