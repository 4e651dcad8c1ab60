#pragma once

// Small fixed-size linear algebra aliases and helpers shared across the
// library. Everything is double precision; Eigen provides the storage and
// decompositions.

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace stkin {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

/// Antisymmetric matrix of the cross product: hat(w) * q == w.cross(q).
inline Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

/// Inverse of hat() for antisymmetric input; averages the off-diagonal
/// pairs so nearly-antisymmetric matrices round-trip cleanly.
inline Vec3 unhat(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

/// Rotation by `angle` around a (not necessarily unit) axis.
inline Mat3 rotation_about(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

/// Nearest orthogonal matrix in the Frobenius sense (polar factor via SVD).
/// Used to scrub accumulated drift out of integrated rotation matrices.
inline Mat3 polar_orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Deterministic uniform draw in [-1, 1). Derived from the top 53 bits of
/// the engine output so results are bit-stable across platforms, unlike
/// std::uniform_real_distribution.
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

/// Deterministic uniform draw in [0, 1).
inline double uniform_01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace stkin
