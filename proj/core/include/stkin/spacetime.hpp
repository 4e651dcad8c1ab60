#pragma once

// Core value types of a four-dimensional nonrelativistic space-time.
//
// The model keeps absolute time and three-dimensional Euclidean space-slices:
// events carry an absolute instant, four-vectors carry a time span that every
// observer agrees on, and the spacelike subspace (time span zero) carries the
// Euclidean inner product. The inner product identifies spacelike vectors
// with spacelike covectors (flat/sharp below); no such identification exists
// for full four-vectors, which is why contravariant, covariant and mixed
// second-order tensors are kept apart by an explicit variance tag.
//
// All components are expressed in one fixed inertial orthonormal chart with
// coordinate order (t, x, y, z). Observers never change that storage; they
// produce relative forms (see observers.hpp).

#include <stdexcept>

#include "stkin/linalg.hpp"

namespace stkin {

using Instant = double;

/// An event: absolute instant plus spatial position in the fixed chart.
struct WorldPoint {
  Instant t = 0.0;
  Vec3 q = Vec3::Zero();
};

/// Difference of events. The time span `dt` is absolute: it is the value of
/// the time evaluation on the vector and is observer independent.
struct FourVector {
  double dt = 0.0;
  Vec3 dq = Vec3::Zero();

  Vec4 vec4() const { return Vec4(dt, dq.x(), dq.y(), dq.z()); }
  static FourVector from_vec4(const Vec4& v) { return {v(0), Vec3(v(1), v(2), v(3))}; }
};

/// Element of the spacelike subspace (four-vectors with zero time span).
struct SpaceVector {
  Vec3 q = Vec3::Zero();
};

/// Linear form on four-vectors, components (k0, k) so that
/// K(C) = k0 * C.dt + k . C.dq.
struct FourCovector {
  double k0 = 0.0;
  Vec3 k = Vec3::Zero();

  double operator()(const FourVector& c) const { return k0 * c.dt + k.dot(c.dq); }
  Vec4 vec4() const { return Vec4(k0, k.x(), k.y(), k.z()); }
  static FourCovector from_vec4(const Vec4& v) { return {v(0), Vec3(v(1), v(2), v(3))}; }
};

/// Linear form on spacelike vectors.
struct SpaceCovector {
  Vec3 k = Vec3::Zero();

  double operator()(const SpaceVector& c) const { return k.dot(c.q); }
};

inline WorldPoint operator+(const WorldPoint& x, const FourVector& d) {
  return {x.t + d.dt, x.q + d.dq};
}
inline FourVector operator-(const WorldPoint& x, const WorldPoint& y) {
  return {x.t - y.t, x.q - y.q};
}
inline FourVector operator+(const FourVector& a, const FourVector& b) {
  return {a.dt + b.dt, a.dq + b.dq};
}
inline FourVector operator-(const FourVector& a, const FourVector& b) {
  return {a.dt - b.dt, a.dq - b.dq};
}
inline FourVector operator*(double s, const FourVector& a) { return {s * a.dt, s * a.dq}; }
inline SpaceVector operator+(const SpaceVector& a, const SpaceVector& b) { return {a.q + b.q}; }
inline SpaceVector operator-(const SpaceVector& a, const SpaceVector& b) { return {a.q - b.q}; }
inline SpaceVector operator*(double s, const SpaceVector& a) { return {s * a.q}; }
inline FourCovector operator+(const FourCovector& a, const FourCovector& b) {
  return {a.k0 + b.k0, a.k + b.k};
}
inline FourCovector operator-(const FourCovector& a, const FourCovector& b) {
  return {a.k0 - b.k0, a.k - b.k};
}
inline FourCovector operator*(double s, const FourCovector& a) { return {s * a.k0, s * a.k}; }

/// Absolute time of an event.
inline Instant time_eval(const WorldPoint& x) { return x.t; }

/// Time span of a four-vector.
inline double tau_of(const FourVector& c) { return c.dt; }

/// True when the four-vector lies in the spacelike subspace.
inline bool is_spacelike(const FourVector& c, double tol = 0.0) {
  return std::abs(c.dt) <= tol;
}

/// Embed a spacelike vector as a four-vector with zero time span.
inline FourVector embed(const SpaceVector& c) { return {0.0, c.q}; }

/// Euclidean inner product on the spacelike subspace.
inline double euclid_dot(const SpaceVector& a, const SpaceVector& b) { return a.q.dot(b.q); }

inline double norm(const SpaceVector& a) { return a.q.norm(); }

/// Euclidean identification of spacelike vectors with spacelike covectors.
/// In the orthonormal chart this is the identity on components.
inline SpaceCovector flat(const SpaceVector& c) { return {c.q}; }
inline SpaceVector sharp(const SpaceCovector& k) { return {k.k}; }

/// Restriction of a four-covector to the spacelike subspace: the time
/// component is forgotten, the spatial components survive.
inline SpaceCovector restrict_covector(const FourCovector& k) { return {k.k}; }

enum class Variance { contravariant, covariant, mixed };

const char* to_string(Variance v);

namespace detail {
void require_finite(const Mat4& m, const char* what);
void require_finite(const Mat3& m, const char* what);
void require_same_variance(Variance a, Variance b, const char* op);
}  // namespace detail

/// Second-order tensor over the full four-dimensional space. The variance
/// tag records which of M (x) M, M* (x) M* or M (x) M* the components refer
/// to; mixing variances in arithmetic is a type error, reported by throwing.
/// Component convention: row index is the first tensor slot, column index
/// the second, in chart order (t, x, y, z).
class Tensor2 {
 public:
  Tensor2(Variance variance, const Mat4& components)
      : variance_(variance), m_(components) {
    detail::require_finite(m_, "Tensor2");
  }

  static Tensor2 zero(Variance variance) { return Tensor2(variance, Mat4::Zero()); }
  /// Identity makes sense only for the mixed tensor M (x) M*.
  static Tensor2 identity() { return Tensor2(Variance::mixed, Mat4::Identity()); }

  Variance variance() const { return variance_; }
  const Mat4& components() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Tensor2 operator+(const Tensor2& o) const {
    detail::require_same_variance(variance_, o.variance_, "add");
    return Tensor2(variance_, m_ + o.m_);
  }
  Tensor2 operator-(const Tensor2& o) const {
    detail::require_same_variance(variance_, o.variance_, "subtract");
    return Tensor2(variance_, m_ - o.m_);
  }
  friend Tensor2 operator*(double s, const Tensor2& t) {
    return Tensor2(t.variance_, s * t.m_);
  }

  /// Transpose swaps the two slots. For the mixed tensor the result would
  /// live in M* (x) M, which this library does not represent, so the
  /// operation is rejected; only purely contra- or covariant tensors (and
  /// every spacelike tensor, see SpaceTensor2) have a transpose here.
  Tensor2 transposed() const;

  /// Mixed tensors act on four-vectors.
  FourVector apply(const FourVector& c) const;
  /// Covariant tensors pair with two four-vectors.
  double apply(const FourVector& a, const FourVector& b) const;

 private:
  Variance variance_;
  Mat4 m_;
};

/// Second-order tensor over the spacelike subspace. Because the Euclidean
/// form identifies E with E*, every variance admits a transpose and, in the
/// orthonormal chart, all three variances share componentwise arithmetic;
/// the tag is kept so relative-form and derivative code can still dispatch
/// on it.
class SpaceTensor2 {
 public:
  SpaceTensor2(Variance variance, const Mat3& components)
      : variance_(variance), m_(components) {
    detail::require_finite(m_, "SpaceTensor2");
  }

  static SpaceTensor2 zero(Variance variance) { return SpaceTensor2(variance, Mat3::Zero()); }
  static SpaceTensor2 identity(Variance variance) {
    return SpaceTensor2(variance, Mat3::Identity());
  }

  Variance variance() const { return variance_; }
  const Mat3& components() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SpaceTensor2 operator+(const SpaceTensor2& o) const {
    detail::require_same_variance(variance_, o.variance_, "add");
    return SpaceTensor2(variance_, m_ + o.m_);
  }
  SpaceTensor2 operator-(const SpaceTensor2& o) const {
    detail::require_same_variance(variance_, o.variance_, "subtract");
    return SpaceTensor2(variance_, m_ - o.m_);
  }
  friend SpaceTensor2 operator*(double s, const SpaceTensor2& t) {
    return SpaceTensor2(t.variance_, s * t.m_);
  }

  SpaceTensor2 transposed() const { return SpaceTensor2(variance_, m_.transpose()); }

  Vec3 apply(const Vec3& c) const { return m_ * c; }

 private:
  Variance variance_;
  Mat3 m_;
};

/// Antisymmetric part (as a difference, not halved): A* - A.
inline SpaceTensor2 antisym_space(const SpaceTensor2& a) {
  return SpaceTensor2(a.variance(), Mat3(a.components().transpose() - a.components()));
}

}  // namespace stkin
