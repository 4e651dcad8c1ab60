#pragma once

// Rigid observers: an origin worldline q_o(t) plus an orthogonal frame
// rotation R(t) with R(anchor) = I solving R' = Omega(t) R for an
// antisymmetric angular velocity Omega(t).
//
// The observer induces the splitting of space-time into observer time and
// observer space,
//   H(x) = (t, R(t)^-1 (x_q - q_o(t))),   P(t, q) = q_o(t) + R(t) q,
// and the relative forms of absolute quantities. Everything an observer
// reports about the world is phrased through H, P and their derivatives;
// the absolute chart components never change.
//
// Construction integrates R (and, for observers carried by a flow, the
// origin line) once on a fixed grid around the anchor instant; queries use
// dense output (one local integrator step from the nearest cached node) and
// remain pure. Queries outside the cached horizon integrate from the
// boundary on demand.

#include <functional>
#include <memory>

#include "stkin/fields.hpp"

namespace stkin {

struct ObserverOptions {
  double step = 1e-3;              // integration step for R(t) and the origin line
  double horizon = 12.0;           // cached range is [anchor - horizon, anchor + horizon]
  int reorthonormalize_every = 100;  // polar projection cadence during integration
};

/// A point of observer space-time: observer time and observer-space
/// coordinates.
struct SplitPoint {
  Instant t = 0.0;
  Vec3 q = Vec3::Zero();
};

class RigidObserver {
 public:
  using OmegaFn = std::function<Mat3(double)>;

  /// Uniformly translating, non-rotating observer through `origin`.
  static RigidObserver inertial(const Vec3& velocity = Vec3::Zero(),
                                const WorldPoint& origin = {});

  /// Rigid observer with uniformly translating origin and frame rotation
  /// integrated from omega(t), which must be antisymmetric (validated on
  /// the construction grid). Anchored at origin.t: R(origin.t) = I.
  static RigidObserver rotating(const WorldPoint& origin, OmegaFn omega,
                                const Vec3& origin_velocity = Vec3::Zero(),
                                const ObserverOptions& opts = {});

  /// Constant angular velocity hat(omega_vector).
  static RigidObserver rotating_uniform(const WorldPoint& origin, const Vec3& omega_vector,
                                        const Vec3& origin_velocity = Vec3::Zero(),
                                        const ObserverOptions& opts = {});

  /// Rigid observer whose origin line is an integral curve of `carrier`.
  static RigidObserver rotating_along(const WorldPoint& origin, OmegaFn omega,
                                      const VelocityField& carrier,
                                      const ObserverOptions& opts = {});

  /// Observer comoving with the continuum u along the particle through o
  /// and rotating with the local angular velocity of u on that worldline:
  /// Omega_o(t) = -(1/2) ((grad u)* - grad u) at the particle.
  static RigidObserver corotating(const VelocityField& u, const WorldPoint& o,
                                  const ObserverOptions& opts = {});

  Instant anchor() const;
  WorldPoint origin(Instant t) const;
  Vec3 origin_velocity(Instant t) const;

  /// Frame rotation R(t), orthogonal with R(anchor) = I.
  Mat3 rotation(Instant t) const;
  /// Angular velocity Omega(t), antisymmetric.
  Mat3 omega(Instant t) const;
  /// Relative form of the angular velocity: omega = R^-1 Omega R = R^-1 R'.
  Mat3 omega_rel(Instant t) const;

  /// Spatial velocity of the observer point through x:
  /// U(x) = v_o(t) + Omega(t) (x_q - q_o(t)), t = time of x.
  Vec3 velocity(const WorldPoint& x) const;
  FourVector four_velocity(const WorldPoint& x) const { return {1.0, velocity(x)}; }
  /// The implied velocity field as a field object (derivatives by finite
  /// differences; its exact spacelike derivative is Omega).
  VelocityField velocity_field() const;

  /// H(x): observer time and observer-space coordinates of an event.
  SplitPoint split(const WorldPoint& x) const;
  /// P(t, q): the event at observer coordinates (t, q); inverse of split.
  WorldPoint unsplit(Instant t, const Vec3& q) const;

  /// DH(x) in chart components; rows/cols in chart order (t, x, y, z):
  /// [[1, 0], [-R^-1 U(x), R^-1]].
  Mat4 split_jacobian(const WorldPoint& x) const;
  /// Time partial of P at (t, q): the four-velocity of the observer point,
  /// (1, U(P(t, q))).
  FourVector unsplit_time_partial(Instant t, const Vec3& q) const;
  /// Space partial of P at (t, q): the frame matrix R(t).
  Mat3 unsplit_space_jacobian(Instant t) const;
  /// DP(t, q) as one matrix: [[1, 0], [U(P), R]].
  Mat4 unsplit_jacobian(Instant t, const Vec3& q) const;

  /// True when the frame actually rotates (omega not identically zero).
  bool rotating_frame() const;

 private:
  struct Impl;
  explicit RigidObserver(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// --- relative forms of absolute values ---------------------------------------

/// Relative form of a four-vector: (time span, R^-1 (C_q - U tau(C))).
struct RelVector {
  double time = 0.0;
  Vec3 space = Vec3::Zero();
};

/// Relative form of a four-covector: (K(U), R^-1 k).
struct RelCovector {
  double time = 0.0;
  Vec3 space = Vec3::Zero();
};

/// Relative form of a second-order four-tensor, stored as the four blocks
/// of the split matrix: time-time, time-space row, space-time column and
/// the space-space block. The time-time block does not depend on the
/// observer.
struct RelTensor2 {
  Variance variance = Variance::mixed;
  double tt = 0.0;
  Vec3 ts = Vec3::Zero();
  Vec3 st = Vec3::Zero();
  Mat3 ss = Mat3::Zero();

  Mat4 as_matrix() const;
};

/// Relative form of a mixed E (x) M* value (spacelike first slot, full
/// covector second slot): (R^-1 F U, R^-1 (F i) R).
struct RelMixedEM {
  Vec3 time = Vec3::Zero();
  Mat3 space = Mat3::Zero();
};

double rel_scalar(const RigidObserver& obs, const ScalarField& f, Instant t, const Vec3& q);
RelVector rel_vector(const RigidObserver& obs, const FourVector& c, const WorldPoint& x);
Vec3 rel_space_vector(const RigidObserver& obs, const Vec3& c, Instant t);
Vec3 rel_space_covector(const RigidObserver& obs, const Vec3& k, Instant t);
Mat3 rel_space_tensor(const RigidObserver& obs, const Mat3& f, Instant t);
RelCovector rel_covector(const RigidObserver& obs, const FourCovector& k, const WorldPoint& x);
RelMixedEM rel_mixed_EM(const RigidObserver& obs, const Mat34& f, const WorldPoint& x);
RelTensor2 rel_tensor2(const RigidObserver& obs, const Tensor2& t, const WorldPoint& x);
RelTensor2 rel_tensor2_con(const RigidObserver& obs, const Mat4& t, const WorldPoint& x);
RelTensor2 rel_tensor2_cov(const RigidObserver& obs, const Mat4& t, const WorldPoint& x);
RelTensor2 rel_tensor2_mix(const RigidObserver& obs, const Mat4& t, const WorldPoint& x);

/// The u-relative velocity v_U(t, q) = R^-1 (u(P) - U(P)).
Vec3 rel_velocity(const RigidObserver& obs, const VelocityField& u, Instant t, const Vec3& q);

// --- relative fields (closures in observer coordinates) ----------------------

using RelScalarField = std::function<double(Instant, const Vec3&)>;
using RelVectorField = std::function<Vec3(Instant, const Vec3&)>;
using RelTensorField = std::function<Mat3(Instant, const Vec3&)>;

RelScalarField rel_scalar_field(const RigidObserver& obs, const ScalarField& f);
RelVectorField rel_velocity_field(const RigidObserver& obs, const VelocityField& u);
/// Relative form of a spacelike vector field; rejects non-spacelike fields.
RelVectorField rel_space_vector_field(const RigidObserver& obs, const VectorField& c);
/// Relative form of a spacelike covector field (componentwise like the
/// vector case, through the Euclidean identification).
RelVectorField rel_space_covector_field(const RigidObserver& obs, const CovectorField& k);
/// Relative form of the space block of a spacelike tensor field: R^-1 f R.
RelTensorField rel_space_tensor_field(const RigidObserver& obs, const Tensor2Field& f);

}  // namespace stkin
