#include "stkin/derivatives.hpp"

#include <cmath>
#include <stdexcept>

namespace stkin {

void OracleConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(s_step) || !positive(flow_step) || !positive(fd_h)) {
    throw std::invalid_argument("OracleConfig: steps must be positive and finite");
  }
  if (s_step < 10.0 * flow_step) {
    throw std::invalid_argument("OracleConfig: s_step must be at least 10 * flow_step");
  }
}

// --- material derivatives -----------------------------------------------------

double material_derivative(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                           const FdConfig& fd) {
  return f.derivative(x, fd)(u.at(x));
}

FourVector material_derivative(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                               const FdConfig& fd) {
  return FourVector::from_vec4(c.derivative_components(x, fd) * u.at(x).vec4());
}

FourCovector material_derivative(const CovectorField& k, const VelocityField& u,
                                 const WorldPoint& x, const FdConfig& fd) {
  return FourCovector::from_vec4(k.derivative_components(x, fd) * u.at(x).vec4());
}

Tensor2 material_derivative(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                            const FdConfig& fd) {
  return Tensor2(t.variance(), t.directional_derivative(x, u.at(x), fd));
}

// --- finite differences of relative fields ------------------------------------

namespace relfd {

double scalar_partial_t(const RelScalarField& f, Instant t, const Vec3& q, double h) {
  const double d = fd::step_for(h, t);
  return (f(t + d, q) - f(t - d, q)) / (2.0 * d);
}

Vec3 scalar_gradient(const RelScalarField& f, Instant t, const Vec3& q, double h) {
  Vec3 g;
  for (int j = 0; j < 3; ++j) {
    const double d = fd::step_for(h, q[j]);
    Vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    g[j] = (f(t, qp) - f(t, qm)) / (2.0 * d);
  }
  return g;
}

Vec3 partial_t(const RelVectorField& f, Instant t, const Vec3& q, double h) {
  const double d = fd::step_for(h, t);
  return (f(t + d, q) - f(t - d, q)) / (2.0 * d);
}

Mat3 gradient(const RelVectorField& f, Instant t, const Vec3& q, double h) {
  Mat3 g;
  for (int j = 0; j < 3; ++j) {
    const double d = fd::step_for(h, q[j]);
    Vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    g.col(j) = (f(t, qp) - f(t, qm)) / (2.0 * d);
  }
  return g;
}

Mat3 tensor_partial_t(const RelTensorField& f, Instant t, const Vec3& q, double h) {
  const double d = fd::step_for(h, t);
  return (f(t + d, q) - f(t - d, q)) / (2.0 * d);
}

Mat3 tensor_directional(const RelTensorField& f, Instant t, const Vec3& q, const Vec3& v,
                        double h) {
  Mat3 sum = Mat3::Zero();
  for (int j = 0; j < 3; ++j) {
    const double d = fd::step_for(h, q[j]);
    Vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    sum += v[j] / (2.0 * d) * (f(t, qp) - f(t, qm));
  }
  return sum;
}

}  // namespace relfd

Vec3 material_rel(const RigidObserver& obs, const RelVectorField& c_rel,
                  const RelVectorField& v_rel, Instant t, const Vec3& q, double fd_h) {
  const Vec3 c = c_rel(t, q);
  const Vec3 v = v_rel(t, q);
  return relfd::partial_t(c_rel, t, q, fd_h) + obs.omega_rel(t) * c +
         relfd::gradient(c_rel, t, q, fd_h) * v;
}

// --- Lie derivatives ------------------------------------------------------------

double lie_derivative(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                      const FdConfig& fd) {
  return material_derivative(f, u, x, fd);
}

FourVector lie_derivative(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                          const FdConfig& fd) {
  const Vec4 dc_u = c.derivative_components(x, fd) * u.at(x).vec4();
  const Vec4 du_c = u.derivative4(x, fd) * c(x).vec4();
  return FourVector::from_vec4(dc_u - du_c);
}

FourCovector lie_derivative(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                            const FdConfig& fd) {
  const Vec4 dk_u = k.derivative_components(x, fd) * u.at(x).vec4();
  const Vec4 gt_k = u.derivative4(x, fd).transpose() * k(x).vec4();
  return FourCovector::from_vec4(dk_u + gt_k);
}

Tensor2 lie_derivative(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                       const FdConfig& fd) {
  const Mat4 dt_u = t.directional_derivative(x, u.at(x), fd);
  const Mat4 g = u.derivative4(x, fd);
  const Mat4 tv = t.components(x);
  switch (t.variance()) {
    case Variance::contravariant:
      return Tensor2(t.variance(), dt_u - g * tv - tv * g.transpose());
    case Variance::covariant:
      return Tensor2(t.variance(), dt_u + g.transpose() * tv + tv * g);
    case Variance::mixed:
      return Tensor2(t.variance(), dt_u - g * tv + tv * g);
  }
  throw std::invalid_argument("lie_derivative: unknown variance");
}

// --- flow-pullback oracles -------------------------------------------------------

namespace {

/// Central difference of a pullback along the flow; P maps a FlowResult to
/// the pulled-back value at x.
template <typename P>
auto flow_central(const VelocityField& u, const WorldPoint& x, const OracleConfig& cfg,
                  const P& pullback) {
  cfg.validate();
  const auto plus = pullback(flow(u, x, +cfg.s_step, cfg.flow_step));
  const auto minus = pullback(flow(u, x, -cfg.s_step, cfg.flow_step));
  // Materialize before returning: an unevaluated difference would reference
  // the two locals above.
  using R = std::decay_t<decltype(plus)>;
  R result = (1.0 / (2.0 * cfg.s_step)) * (plus - minus);
  return result;
}

}  // namespace

double lie_oracle(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                  const OracleConfig& cfg) {
  return flow_central(u, x, cfg, [&](const FlowResult& fr) { return f(fr.point); });
}

FourVector lie_oracle(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                      const OracleConfig& cfg) {
  Vec4 v = flow_central(u, x, cfg, [&](const FlowResult& fr) {
    return fr.jacobian.partialPivLu().solve(c(fr.point).vec4()).eval();
  });
  return FourVector::from_vec4(v);
}

FourCovector lie_oracle(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                        const OracleConfig& cfg) {
  Vec4 v = flow_central(u, x, cfg, [&](const FlowResult& fr) {
    return (fr.jacobian.transpose() * k(fr.point).vec4()).eval();
  });
  return FourCovector::from_vec4(v);
}

Tensor2 lie_oracle(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                   const OracleConfig& cfg) {
  Mat4 m;
  switch (t.variance()) {
    case Variance::contravariant:
      m = flow_central(u, x, cfg, [&](const FlowResult& fr) {
        const Mat4 jinv = fr.jacobian.partialPivLu().inverse();
        return (jinv * t.components(fr.point) * jinv.transpose()).eval();
      });
      break;
    case Variance::covariant:
      m = flow_central(u, x, cfg, [&](const FlowResult& fr) {
        return (fr.jacobian.transpose() * t.components(fr.point) * fr.jacobian).eval();
      });
      break;
    case Variance::mixed:
      m = flow_central(u, x, cfg, [&](const FlowResult& fr) {
        const Mat4 jinv = fr.jacobian.partialPivLu().inverse();
        return (jinv * t.components(fr.point) * fr.jacobian).eval();
      });
      break;
    default:
      throw std::invalid_argument("lie_oracle: unknown variance");
  }
  return Tensor2(t.variance(), m);
}

double material_oracle(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                       const OracleConfig& cfg) {
  return flow_central(u, x, cfg, [&](const FlowResult& fr) { return f(fr.point); });
}

FourVector material_oracle(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                           const OracleConfig& cfg) {
  Vec4 v = flow_central(u, x, cfg,
                        [&](const FlowResult& fr) { return c(fr.point).vec4().eval(); });
  return FourVector::from_vec4(v);
}

FourCovector material_oracle(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                             const OracleConfig& cfg) {
  Vec4 v = flow_central(u, x, cfg,
                        [&](const FlowResult& fr) { return k(fr.point).vec4().eval(); });
  return FourCovector::from_vec4(v);
}

Tensor2 material_oracle(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                        const OracleConfig& cfg) {
  Mat4 m = flow_central(u, x, cfg,
                        [&](const FlowResult& fr) { return t.components(fr.point); });
  return Tensor2(t.variance(), m);
}

// --- convected and corotational forms ---------------------------------------------

Vec3 upper_convected_rel(const RelVectorField& v, const RelVectorField& c, Instant t,
                         const Vec3& q, double fd_h) {
  const Vec3 cv = c(t, q);
  const Vec3 vv = v(t, q);
  const Mat3 grad_v = relfd::gradient(v, t, q, fd_h);
  return relfd::partial_t(c, t, q, fd_h) + relfd::gradient(c, t, q, fd_h) * vv - grad_v * cv;
}

Vec3 lower_convected_rel(const RelVectorField& v, const RelVectorField& k, Instant t,
                         const Vec3& q, double fd_h) {
  const Vec3 kv = k(t, q);
  const Vec3 vv = v(t, q);
  const Mat3 grad_v = relfd::gradient(v, t, q, fd_h);
  return relfd::partial_t(k, t, q, fd_h) + relfd::gradient(k, t, q, fd_h) * vv +
         grad_v.transpose() * kv;
}

Vec3 jaumann_rel(const RelVectorField& v, const RelVectorField& c, Instant t, const Vec3& q,
                 double fd_h) {
  const Vec3 cv = c(t, q);
  const Vec3 vv = v(t, q);
  const Mat3 grad_v = relfd::gradient(v, t, q, fd_h);
  return relfd::partial_t(c, t, q, fd_h) + relfd::gradient(c, t, q, fd_h) * vv +
         0.5 * (grad_v.transpose() - grad_v) * cv;
}

Mat3 upper_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h) {
  const Mat3 tv = t(time, q);
  const Vec3 vv = v(time, q);
  const Mat3 grad_v = relfd::gradient(v, time, q, fd_h);
  const Mat3 tdot = relfd::tensor_partial_t(t, time, q, fd_h) +
                    relfd::tensor_directional(t, time, q, vv, fd_h);
  return tdot - grad_v * tv - tv * grad_v.transpose();
}

Mat3 lower_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h) {
  const Mat3 tv = t(time, q);
  const Vec3 vv = v(time, q);
  const Mat3 grad_v = relfd::gradient(v, time, q, fd_h);
  const Mat3 tdot = relfd::tensor_partial_t(t, time, q, fd_h) +
                    relfd::tensor_directional(t, time, q, vv, fd_h);
  return tdot + grad_v.transpose() * tv + tv * grad_v;
}

Mat3 mixed_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h) {
  const Mat3 tv = t(time, q);
  const Vec3 vv = v(time, q);
  const Mat3 grad_v = relfd::gradient(v, time, q, fd_h);
  const Mat3 tdot = relfd::tensor_partial_t(t, time, q, fd_h) +
                    relfd::tensor_directional(t, time, q, vv, fd_h);
  return tdot - grad_v * tv + tv * grad_v;
}

Vec3 jaumann(const VectorField& c, const VelocityField& u, const WorldPoint& x,
             const FdConfig& fd) {
  if (!c.spacelike()) {
    throw std::invalid_argument("jaumann: field is not spacelike");
  }
  const Vec3 dc_u = material_derivative(c, u, x, fd).dq;
  return dc_u + 0.5 * wedge_gradient(u, x, fd) * c(x).dq;
}

double jaumann_corotating_residual(const VelocityField& u, const WorldPoint& o,
                                   const VectorField& c, std::span<const Instant> times,
                                   const ObserverOptions& opts, double fd_h) {
  const RigidObserver obs = RigidObserver::corotating(u, o, opts);
  const RelVectorField c_rel = rel_space_vector_field(obs, c);
  double worst = 0.0;
  for (Instant t : times) {
    const Vec3 lhs = relfd::partial_t(c_rel, t, Vec3::Zero(), fd_h);
    const WorldPoint x = obs.unsplit(t, Vec3::Zero());  // the particle at time t
    const Vec3 rhs = obs.rotation(t).transpose() * jaumann(c, u, x);
    worst = std::max(worst, max_abs(Vec3(lhs - rhs)));
  }
  return worst;
}

// --- deformation gradient -----------------------------------------------------------

Mat3 deformation_gradient(const VelocityField& u, const RigidObserver& obs, Instant t0,
                          const Vec3& X, double s, double flow_step) {
  const WorldPoint x = obs.unsplit(t0, X);
  const FlowResult fr = flow(u, x, s, flow_step);
  const Mat4 m = obs.split_jacobian(fr.point) * fr.jacobian * obs.unsplit_jacobian(t0, X);
  return m.block<3, 3>(1, 1);
}

double deformation_lie_check(const VelocityField& u, const RigidObserver& obs, Instant t0,
                             const Vec3& X, double s, double flow_step, double ds) {
  if (!(ds > 0.0) || !std::isfinite(ds)) {
    throw std::invalid_argument("deformation_lie_check: ds must be positive and finite");
  }
  const Mat3 f_plus = deformation_gradient(u, obs, t0, X, s + ds, flow_step);
  const Mat3 f_minus = deformation_gradient(u, obs, t0, X, s - ds, flow_step);
  const Mat3 fdot = (f_plus - f_minus) / (2.0 * ds);
  const Mat3 f = deformation_gradient(u, obs, t0, X, s, flow_step);

  const WorldPoint image = flow_point(u, obs.unsplit(t0, X), s, flow_step);
  const SplitPoint sp = obs.split(image);
  const Mat3 grad_v = relfd::gradient(rel_velocity_field(obs, u), sp.t, sp.q);
  return max_abs(Mat3(fdot - grad_v * f));
}

}  // namespace stkin
