#include "stkin/observers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace stkin {

namespace {

void validate_options(const ObserverOptions& opts) {
  if (!(opts.step > 0.0) || !std::isfinite(opts.step)) {
    throw std::invalid_argument("RigidObserver: step must be positive and finite");
  }
  if (!(opts.horizon >= 0.0) || !std::isfinite(opts.horizon)) {
    throw std::invalid_argument("RigidObserver: horizon must be nonnegative and finite");
  }
  if (opts.reorthonormalize_every < 1) {
    throw std::invalid_argument("RigidObserver: reorthonormalize_every must be >= 1");
  }
}

using Motion = std::function<Vec3(double, const Vec3&)>;

Vec3 line_rk4_step(const Motion& f, double t, const Vec3& q, double h) {
  const Vec3 k1 = f(t, q);
  const Vec3 k2 = f(t + 0.5 * h, q + 0.5 * h * k1);
  const Vec3 k3 = f(t + 0.5 * h, q + 0.5 * h * k2);
  const Vec3 k4 = f(t + h, q + h * k3);
  return q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat3 rot_rk4_step(const RigidObserver::OmegaFn& omega, double t, const Mat3& r, double h) {
  const Mat3 w1 = omega(t);
  const Mat3 w2 = omega(t + 0.5 * h);
  const Mat3 w3 = omega(t + h);
  const Mat3 k1 = w1 * r;
  const Mat3 k2 = w2 * (r + 0.5 * h * k1);
  const Mat3 k3 = w2 * (r + 0.5 * h * k2);
  const Mat3 k4 = w3 * (r + h * k3);
  return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integral curve cache on the symmetric node grid anchor + k * step,
/// k in [-n, n]; dense output takes one local RK4 step from the nearest
/// node, and marches on demand outside the cached horizon.
struct LineCache {
  double anchor = 0.0;
  double step = 1e-3;
  int n = 0;
  Motion motion;
  std::vector<Vec3> nodes;

  void build(double anchor_, const Vec3& q0, Motion motion_, const ObserverOptions& opts) {
    anchor = anchor_;
    step = opts.step;
    motion = std::move(motion_);
    n = static_cast<int>(std::ceil(opts.horizon / step));
    nodes.assign(2 * n + 1, q0);
    Vec3 q = q0;
    for (int k = 0; k < n; ++k) {
      q = line_rk4_step(motion, anchor + k * step, q, step);
      if (!q.allFinite()) throw std::domain_error("RigidObserver: origin line diverged");
      nodes[n + k + 1] = q;
    }
    q = q0;
    for (int k = 0; k < n; ++k) {
      q = line_rk4_step(motion, anchor - k * step, q, -step);
      if (!q.allFinite()) throw std::domain_error("RigidObserver: origin line diverged");
      nodes[n - k - 1] = q;
    }
  }

  Vec3 at(double t) const {
    int k = static_cast<int>(std::llround((t - anchor) / step));
    k = std::max(-n, std::min(n, k));
    double tk = anchor + k * step;
    Vec3 q = nodes[n + k];
    double rest = t - tk;
    const double dir = rest >= 0.0 ? 1.0 : -1.0;
    while (std::abs(rest) > step) {
      q = line_rk4_step(motion, tk, q, dir * step);
      tk += dir * step;
      rest -= dir * step;
    }
    if (rest != 0.0) q = line_rk4_step(motion, tk, q, rest);
    return q;
  }
};

/// Rotation cache for R' = Omega(t) R, R(anchor) = I, with periodic polar
/// reorthonormalization; same grid and dense-output scheme as LineCache.
struct RotCache {
  double anchor = 0.0;
  double step = 1e-3;
  int n = 0;
  int reortho = 100;
  RigidObserver::OmegaFn omega;
  std::vector<Mat3> nodes;

  bool nonzero = false;  // any omega(t) != 0 seen on the construction grid

  /// Validate omega(t) and record whether the frame actually turns.
  void check_omega(double t) {
    const Mat3 w = omega(t);
    if (!w.allFinite()) {
      throw std::invalid_argument("RigidObserver: omega(t) is not finite");
    }
    const double magnitude = max_abs(w);
    const double scale = std::max(1.0, magnitude);
    if (max_abs(Mat3(w + w.transpose())) > 1e-10 * scale) {
      std::ostringstream os;
      os << "RigidObserver: omega(t) is not antisymmetric at t = " << t;
      throw std::invalid_argument(os.str());
    }
    if (magnitude > 0.0) nonzero = true;
  }

  void build(double anchor_, RigidObserver::OmegaFn omega_, const ObserverOptions& opts) {
    anchor = anchor_;
    step = opts.step;
    reortho = opts.reorthonormalize_every;
    omega = std::move(omega_);
    n = static_cast<int>(std::ceil(opts.horizon / step));
    nodes.assign(2 * n + 1, Mat3::Identity());
    check_omega(anchor);
    Mat3 r = Mat3::Identity();
    for (int k = 0; k < n; ++k) {
      r = rot_rk4_step(omega, anchor + k * step, r, step);
      if ((k + 1) % reortho == 0) r = polar_orthonormalize(r);
      check_omega(anchor + (k + 1) * step);
      nodes[n + k + 1] = r;
    }
    r = Mat3::Identity();
    for (int k = 0; k < n; ++k) {
      r = rot_rk4_step(omega, anchor - k * step, r, -step);
      if ((k + 1) % reortho == 0) r = polar_orthonormalize(r);
      check_omega(anchor - (k + 1) * step);
      nodes[n - k - 1] = r;
    }
  }

  Mat3 at(double t) const {
    int k = static_cast<int>(std::llround((t - anchor) / step));
    k = std::max(-n, std::min(n, k));
    double tk = anchor + k * step;
    Mat3 r = nodes[n + k];
    double rest = t - tk;
    const double dir = rest >= 0.0 ? 1.0 : -1.0;
    int taken = 0;
    while (std::abs(rest) > step) {
      r = rot_rk4_step(omega, tk, r, dir * step);
      tk += dir * step;
      rest -= dir * step;
      if (++taken % reortho == 0) r = polar_orthonormalize(r);
    }
    if (rest != 0.0) r = rot_rk4_step(omega, tk, r, rest);
    return r;
  }
};

}  // namespace

struct RigidObserver::Impl {
  Instant anchor = 0.0;
  ObserverOptions opts;
  bool affine_origin = true;
  Vec3 q0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  std::shared_ptr<const LineCache> line;  // set when !affine_origin
  std::shared_ptr<const RotCache> rot;    // null: frame is identity
  OmegaFn omega_fn;                       // null: omega is zero

  Vec3 origin_at(double t) const {
    return affine_origin ? Vec3(q0 + (t - anchor) * v0) : line->at(t);
  }
  Vec3 origin_vel_at(double t) const {
    return affine_origin ? v0 : line->motion(t, line->at(t));
  }
  Mat3 rot_at(double t) const {
    if (rot) return rot->at(t);
    return Mat3::Identity();
  }
  Mat3 omega_at(double t) const {
    if (omega_fn) return omega_fn(t);
    return Mat3::Zero();
  }
};

RigidObserver RigidObserver::inertial(const Vec3& velocity, const WorldPoint& origin) {
  auto impl = std::make_shared<Impl>();
  impl->anchor = origin.t;
  impl->q0 = origin.q;
  impl->v0 = velocity;
  return RigidObserver(std::move(impl));
}

RigidObserver RigidObserver::rotating(const WorldPoint& origin, OmegaFn omega,
                                      const Vec3& origin_velocity,
                                      const ObserverOptions& opts) {
  if (!omega) throw std::invalid_argument("RigidObserver: omega callback is empty");
  validate_options(opts);
  auto impl = std::make_shared<Impl>();
  impl->anchor = origin.t;
  impl->opts = opts;
  impl->q0 = origin.q;
  impl->v0 = origin_velocity;
  auto rot = std::make_shared<RotCache>();
  rot->build(origin.t, omega, opts);
  impl->rot = rot;
  impl->omega_fn = std::move(omega);
  return RigidObserver(std::move(impl));
}

RigidObserver RigidObserver::rotating_uniform(const WorldPoint& origin, const Vec3& omega_vector,
                                              const Vec3& origin_velocity,
                                              const ObserverOptions& opts) {
  const Mat3 w = hat(omega_vector);
  return rotating(origin, [w](double) { return w; }, origin_velocity, opts);
}

RigidObserver RigidObserver::rotating_along(const WorldPoint& origin, OmegaFn omega,
                                            const VelocityField& carrier,
                                            const ObserverOptions& opts) {
  if (!omega) throw std::invalid_argument("RigidObserver: omega callback is empty");
  validate_options(opts);
  auto impl = std::make_shared<Impl>();
  impl->anchor = origin.t;
  impl->opts = opts;
  impl->affine_origin = false;
  auto line = std::make_shared<LineCache>();
  line->build(origin.t, origin.q,
              [carrier](double t, const Vec3& q) { return carrier(t, q); }, opts);
  impl->line = line;
  auto rot = std::make_shared<RotCache>();
  rot->build(origin.t, omega, opts);
  impl->rot = rot;
  impl->omega_fn = std::move(omega);
  return RigidObserver(std::move(impl));
}

RigidObserver RigidObserver::corotating(const VelocityField& u, const WorldPoint& o,
                                        const ObserverOptions& opts) {
  validate_options(opts);
  auto line = std::make_shared<LineCache>();
  line->build(o.t, o.q, [u](double t, const Vec3& q) { return u(t, q); }, opts);
  // The frame turns with the local angular velocity of the continuum on the
  // particle line.
  OmegaFn omega = [u, line](double t) {
    return vorticity_operator(u, WorldPoint{t, line->at(t)});
  };
  auto impl = std::make_shared<Impl>();
  impl->anchor = o.t;
  impl->opts = opts;
  impl->affine_origin = false;
  impl->line = line;
  auto rot = std::make_shared<RotCache>();
  rot->build(o.t, omega, opts);
  impl->rot = rot;
  impl->omega_fn = std::move(omega);
  return RigidObserver(std::move(impl));
}

Instant RigidObserver::anchor() const { return impl_->anchor; }

WorldPoint RigidObserver::origin(Instant t) const { return {t, impl_->origin_at(t)}; }

Vec3 RigidObserver::origin_velocity(Instant t) const { return impl_->origin_vel_at(t); }

Mat3 RigidObserver::rotation(Instant t) const { return impl_->rot_at(t); }

Mat3 RigidObserver::omega(Instant t) const { return impl_->omega_at(t); }

Mat3 RigidObserver::omega_rel(Instant t) const {
  const Mat3 r = impl_->rot_at(t);
  return r.transpose() * impl_->omega_at(t) * r;
}

Vec3 RigidObserver::velocity(const WorldPoint& x) const {
  return impl_->origin_vel_at(x.t) + impl_->omega_at(x.t) * (x.q - impl_->origin_at(x.t));
}

VelocityField RigidObserver::velocity_field() const {
  RigidObserver self = *this;
  return VelocityField([self](double t, const Vec3& q) { return self.velocity({t, q}); });
}

SplitPoint RigidObserver::split(const WorldPoint& x) const {
  const Mat3 r = impl_->rot_at(x.t);
  return {x.t, r.transpose() * (x.q - impl_->origin_at(x.t))};
}

WorldPoint RigidObserver::unsplit(Instant t, const Vec3& q) const {
  return {t, impl_->origin_at(t) + impl_->rot_at(t) * q};
}

Mat4 RigidObserver::split_jacobian(const WorldPoint& x) const {
  const Mat3 rt = impl_->rot_at(x.t).transpose();
  Mat4 dh = Mat4::Zero();
  dh(0, 0) = 1.0;
  dh.block<3, 1>(1, 0) = -rt * velocity(x);
  dh.block<3, 3>(1, 1) = rt;
  return dh;
}

FourVector RigidObserver::unsplit_time_partial(Instant t, const Vec3& q) const {
  return {1.0, velocity(unsplit(t, q))};
}

Mat3 RigidObserver::unsplit_space_jacobian(Instant t) const { return impl_->rot_at(t); }

Mat4 RigidObserver::unsplit_jacobian(Instant t, const Vec3& q) const {
  Mat4 dp = Mat4::Zero();
  dp(0, 0) = 1.0;
  dp.block<3, 1>(1, 0) = velocity(unsplit(t, q));
  dp.block<3, 3>(1, 1) = impl_->rot_at(t);
  return dp;
}

bool RigidObserver::rotating_frame() const { return impl_->rot && impl_->rot->nonzero; }

// --- relative forms ----------------------------------------------------------

Mat4 RelTensor2::as_matrix() const {
  Mat4 m;
  m(0, 0) = tt;
  m.block<1, 3>(0, 1) = ts.transpose();
  m.block<3, 1>(1, 0) = st;
  m.block<3, 3>(1, 1) = ss;
  return m;
}

double rel_scalar(const RigidObserver& obs, const ScalarField& f, Instant t, const Vec3& q) {
  return f(obs.unsplit(t, q));
}

RelVector rel_vector(const RigidObserver& obs, const FourVector& c, const WorldPoint& x) {
  const Mat3 rt = obs.rotation(x.t).transpose();
  return {c.dt, rt * (c.dq - c.dt * obs.velocity(x))};
}

Vec3 rel_space_vector(const RigidObserver& obs, const Vec3& c, Instant t) {
  return obs.rotation(t).transpose() * c;
}

Vec3 rel_space_covector(const RigidObserver& obs, const Vec3& k, Instant t) {
  return obs.rotation(t).transpose() * k;
}

Mat3 rel_space_tensor(const RigidObserver& obs, const Mat3& f, Instant t) {
  const Mat3 r = obs.rotation(t);
  return r.transpose() * f * r;
}

RelCovector rel_covector(const RigidObserver& obs, const FourCovector& k, const WorldPoint& x) {
  return {k(obs.four_velocity(x)), obs.rotation(x.t).transpose() * k.k};
}

RelMixedEM rel_mixed_EM(const RigidObserver& obs, const Mat34& f, const WorldPoint& x) {
  const Mat3 r = obs.rotation(x.t);
  RelMixedEM out;
  out.time = r.transpose() * (f * obs.four_velocity(x).vec4());
  out.space = r.transpose() * f.block<3, 3>(0, 1) * r;
  return out;
}

namespace {

RelTensor2 split_blocks(Variance variance, const Mat4& m) {
  RelTensor2 out;
  out.variance = variance;
  out.tt = m(0, 0);
  out.ts = m.block<1, 3>(0, 1).transpose();
  out.st = m.block<3, 1>(1, 0);
  out.ss = m.block<3, 3>(1, 1);
  return out;
}

}  // namespace

RelTensor2 rel_tensor2_con(const RigidObserver& obs, const Mat4& t, const WorldPoint& x) {
  const Mat4 dh = obs.split_jacobian(x);
  return split_blocks(Variance::contravariant, dh * t * dh.transpose());
}

RelTensor2 rel_tensor2_cov(const RigidObserver& obs, const Mat4& t, const WorldPoint& x) {
  const SplitPoint sp = obs.split(x);
  const Mat4 dp = obs.unsplit_jacobian(sp.t, sp.q);
  return split_blocks(Variance::covariant, dp.transpose() * t * dp);
}

RelTensor2 rel_tensor2_mix(const RigidObserver& obs, const Mat4& t, const WorldPoint& x) {
  const Mat4 dh = obs.split_jacobian(x);
  const SplitPoint sp = obs.split(x);
  const Mat4 dp = obs.unsplit_jacobian(sp.t, sp.q);
  return split_blocks(Variance::mixed, dh * t * dp);
}

RelTensor2 rel_tensor2(const RigidObserver& obs, const Tensor2& t, const WorldPoint& x) {
  switch (t.variance()) {
    case Variance::contravariant: return rel_tensor2_con(obs, t.components(), x);
    case Variance::covariant: return rel_tensor2_cov(obs, t.components(), x);
    case Variance::mixed: return rel_tensor2_mix(obs, t.components(), x);
  }
  throw std::invalid_argument("rel_tensor2: unknown variance");
}

Vec3 rel_velocity(const RigidObserver& obs, const VelocityField& u, Instant t, const Vec3& q) {
  const WorldPoint p = obs.unsplit(t, q);
  return obs.rotation(t).transpose() * (u(p.t, p.q) - obs.velocity(p));
}

RelScalarField rel_scalar_field(const RigidObserver& obs, const ScalarField& f) {
  return [obs, f](Instant t, const Vec3& q) { return f(obs.unsplit(t, q)); };
}

RelVectorField rel_velocity_field(const RigidObserver& obs, const VelocityField& u) {
  return [obs, u](Instant t, const Vec3& q) { return rel_velocity(obs, u, t, q); };
}

RelVectorField rel_space_vector_field(const RigidObserver& obs, const VectorField& c) {
  if (!c.spacelike()) {
    throw std::invalid_argument("rel_space_vector_field: field is not spacelike");
  }
  return [obs, c](Instant t, const Vec3& q) {
    return Vec3(obs.rotation(t).transpose() * c(obs.unsplit(t, q)).dq);
  };
}

RelVectorField rel_space_covector_field(const RigidObserver& obs, const CovectorField& k) {
  if (!k.spacelike()) {
    throw std::invalid_argument("rel_space_covector_field: field is not spacelike");
  }
  return [obs, k](Instant t, const Vec3& q) {
    return Vec3(obs.rotation(t).transpose() * k(obs.unsplit(t, q)).k);
  };
}

RelTensorField rel_space_tensor_field(const RigidObserver& obs, const Tensor2Field& f) {
  if (!f.spacelike()) {
    throw std::invalid_argument("rel_space_tensor_field: field is not spacelike");
  }
  return [obs, f](Instant t, const Vec3& q) {
    const Mat3 r = obs.rotation(t);
    return Mat3(r.transpose() * f.space_components(obs.unsplit(t, q)) * r);
  };
}

}  // namespace stkin
