#include "stkin/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace stkin {

namespace {

void require_valid(const std::vector<Poly4::Term>& terms) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.coef)) {
      throw std::invalid_argument("Poly4: non-finite coefficient");
    }
    for (int e : t.e) {
      if (e < 0) throw std::invalid_argument("Poly4: negative exponent");
    }
  }
}

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Poly4::Poly4(std::vector<Term> terms) : terms_(std::move(terms)) {
  require_valid(terms_);
}

Poly4 Poly4::constant(double c) {
  return Poly4(std::vector<Term>{Term{c, {0, 0, 0, 0}}});
}

Poly4 Poly4::coordinate(int axis) {
  if (axis < 0 || axis > 3) throw std::invalid_argument("Poly4: axis out of range");
  Term t;
  t.coef = 1.0;
  t.e[axis] = 1;
  return Poly4(std::vector<Term>{t});
}

Poly4 Poly4::random_cubic(std::mt19937_64& rng, double scale) {
  std::vector<Term> terms;
  // Enumerate exponents in a fixed order so a given seed always yields the
  // same polynomial.
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; a + b <= 3; ++b) {
      for (int c = 0; a + b + c <= 3; ++c) {
        for (int d = 0; a + b + c + d <= 3; ++d) {
          Term t;
          t.coef = scale * uniform_pm1(rng);
          t.e = {a, b, c, d};
          terms.push_back(t);
        }
      }
    }
  }
  return Poly4(std::move(terms));
}

double Poly4::operator()(const WorldPoint& x) const {
  const double c[4] = {x.t, x.q.x(), x.q.y(), x.q.z()};
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (int i = 0; i < 4; ++i) m *= ipow(c[i], t.e[i]);
    sum += m;
  }
  return sum;
}

Poly4 Poly4::partial(int axis) const {
  if (axis < 0 || axis > 3) throw std::invalid_argument("Poly4: axis out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.e[axis] == 0) continue;
    Term d = t;
    d.coef = t.coef * t.e[axis];
    d.e[axis] = t.e[axis] - 1;
    out.push_back(d);
  }
  return Poly4(std::move(out));
}

Poly4 Poly4::operator+(const Poly4& o) const {
  std::vector<Term> sum = terms_;
  sum.insert(sum.end(), o.terms_.begin(), o.terms_.end());
  return Poly4(std::move(sum));
}

Poly4 Poly4::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coef *= s;
  return Poly4(std::move(out));
}

}  // namespace stkin
