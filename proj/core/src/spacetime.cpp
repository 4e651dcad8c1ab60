#include "stkin/spacetime.hpp"

namespace stkin {

const char* to_string(Variance v) {
  switch (v) {
    case Variance::contravariant: return "contravariant";
    case Variance::covariant: return "covariant";
    case Variance::mixed: return "mixed";
  }
  return "unknown";
}

namespace detail {

void require_finite(const Mat4& m, const char* what) {
  if (!m.allFinite()) {
    throw std::domain_error(std::string(what) + ": non-finite components");
  }
}

void require_finite(const Mat3& m, const char* what) {
  if (!m.allFinite()) {
    throw std::domain_error(std::string(what) + ": non-finite components");
  }
}

void require_same_variance(Variance a, Variance b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string("Tensor2: cannot ") + op + " " +
                                to_string(a) + " and " + to_string(b) + " tensors");
  }
}

}  // namespace detail

Tensor2 Tensor2::transposed() const {
  if (variance_ == Variance::mixed) {
    throw std::invalid_argument(
        "Tensor2: transpose of a mixed four-tensor is not representable "
        "(it would live in M* (x) M)");
  }
  return Tensor2(variance_, Mat4(m_.transpose()));
}

FourVector Tensor2::apply(const FourVector& c) const {
  if (variance_ != Variance::mixed) {
    throw std::invalid_argument(
        "Tensor2: only a mixed tensor maps four-vectors to four-vectors");
  }
  return FourVector::from_vec4(m_ * c.vec4());
}

double Tensor2::apply(const FourVector& a, const FourVector& b) const {
  if (variance_ != Variance::covariant) {
    throw std::invalid_argument(
        "Tensor2: only a covariant tensor pairs with two four-vectors");
  }
  return a.vec4().dot(m_ * b.vec4());
}

}  // namespace stkin
