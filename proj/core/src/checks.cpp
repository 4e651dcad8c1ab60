#include "stkin/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "stkin/derivatives.hpp"

namespace stkin::checks {

namespace {

struct NamedField {
  std::string name;
  VelocityField field;
};

std::vector<NamedField> full_catalog() {
  return {
      {"constant", catalog_field("constant", {{"wx", 0.4}, {"wy", -0.3}, {"wz", 0.2}})},
      {"rigid_rotation", catalog_field("rigid_rotation", {{"omega0", 1.0}})},
      {"simple_shear", catalog_field("simple_shear", {{"kappa", 1.0}})},
      {"time_ramped_shear", catalog_field("time_ramped_shear", {{"a", 1.0}})},
      {"planar_vortex", catalog_field("planar_vortex", {{"omega0", 1.0}, {"ell", 1.0}})},
      {"uniform_expansion", catalog_field("uniform_expansion", {{"alpha", 1.0}})},
  };
}

std::vector<NamedField> incompressible_catalog() {
  return {
      {"rigid_rotation", catalog_field("rigid_rotation", {{"omega0", 1.0}})},
      {"simple_shear", catalog_field("simple_shear", {{"kappa", 1.0}})},
      {"planar_vortex", catalog_field("planar_vortex", {{"omega0", 1.0}, {"ell", 1.0}})},
  };
}

std::vector<NamedField> oracle_catalog() {
  return {
      {"rigid_rotation", catalog_field("rigid_rotation", {{"omega0", 1.0}})},
      {"simple_shear", catalog_field("simple_shear", {{"kappa", 1.0}})},
      {"time_ramped_shear", catalog_field("time_ramped_shear", {{"a", 1.0}})},
      {"planar_vortex", catalog_field("planar_vortex", {{"omega0", 1.0}, {"ell", 1.0}})},
  };
}

WorldPoint random_point(std::mt19937_64& rng, double t_min = 0.0, double t_max = 2.0,
                        double q_half = 2.0) {
  WorldPoint x;
  x.t = t_min + uniform_01(rng) * (t_max - t_min);
  for (int i = 0; i < 3; ++i) x.q[i] = q_half * uniform_pm1(rng);
  return x;
}

Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  return Vec3(scale * uniform_pm1(rng), scale * uniform_pm1(rng), scale * uniform_pm1(rng));
}

std::array<Poly4, 3> random_poly3(std::mt19937_64& rng) {
  return {Poly4::random_cubic(rng), Poly4::random_cubic(rng), Poly4::random_cubic(rng)};
}

std::array<Poly4, 4> random_poly4(std::mt19937_64& rng) {
  return {Poly4::random_cubic(rng), Poly4::random_cubic(rng), Poly4::random_cubic(rng),
          Poly4::random_cubic(rng)};
}

std::array<Poly4, 9> random_poly9(std::mt19937_64& rng) {
  std::array<Poly4, 9> p;
  for (auto& c : p) c = Poly4::random_cubic(rng);
  return p;
}

std::array<Poly4, 16> random_poly16(std::mt19937_64& rng) {
  std::array<Poly4, 16> p;
  for (auto& c : p) c = Poly4::random_cubic(rng);
  return p;
}

/// Drop the analytic derivatives of a velocity field, forcing the
/// finite-difference path.
VelocityField fd_only(const VelocityField& u) {
  return VelocityField([u](double t, const Vec3& q) { return u(t, q); });
}

void observe(CheckResult& r, double residual) {
  r.max_residual = std::max(r.max_residual, residual);
  r.points += 1;
}

/// Observers exercised by the splitting checks: one inertial, one rotating.
RigidObserver check_inertial() {
  return RigidObserver::inertial(Vec3(0.3, -0.2, 0.1), WorldPoint{0.0, Vec3(0.5, 0.0, -0.3)});
}

RigidObserver check_rotating(double horizon = 11.0) {
  ObserverOptions opts;
  opts.horizon = horizon;
  return RigidObserver::rotating_uniform(WorldPoint{0.0, Vec3(0.2, -0.1, 0.0)},
                                         Vec3(0.0, 0.0, 1.0), Vec3(0.1, 0.05, -0.02), opts);
}

// ---- fields ------------------------------------------------------------------

CheckResult check_catalog_jacobian_fd() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11001u);
  for (const auto& [name, u] : full_catalog()) {
    VelocityField numeric = fd_only(u);
    for (int i = 0; i < 100; ++i) {
      const WorldPoint x = random_point(rng);
      observe(r, max_abs(Mat4(u.derivative4(x) - numeric.derivative4(x))));
    }
  }
  return r;
}

CheckResult check_flow_semigroup() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11002u);
  for (const auto& [name, u] : full_catalog()) {
    for (int i = 0; i < 5; ++i) {
      const WorldPoint x = random_point(rng);
      for (double s : {0.1, 0.3}) {
        for (double rr : {0.1, 0.3}) {
          const FlowResult whole = flow(u, x, s + rr);
          const FlowResult first = flow(u, x, rr);
          const FlowResult second = flow(u, first.point, s);
          observe(r, max_abs(Vec3(whole.point.q - second.point.q)));
          // Chain rule for the variational solution along the same curve.
          observe(r, max_abs(Mat4(whole.jacobian - second.jacobian * first.jacobian)));
        }
      }
    }
  }
  return r;
}

CheckResult check_flow_jacobian_fd() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11003u);
  const double s = 0.3;
  for (const auto& [name, u] : full_catalog()) {
    for (int i = 0; i < 5; ++i) {
      const WorldPoint x = random_point(rng);
      const Mat4 jac = flow(u, x, s).jacobian;
      auto flowed = [&](const WorldPoint& y) {
        const WorldPoint z = flow_point(u, y, s);
        return Vec4(z.t, z.q.x(), z.q.y(), z.q.z());
      };
      Mat4 numeric;
      for (int axis = 0; axis < 4; ++axis) {
        numeric.col(axis) = fd::central(flowed, x, axis, 1e-5);
      }
      observe(r, max_abs(Mat4(jac - numeric)));
    }
  }
  return r;
}

CheckResult check_flow_identity() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11004u);
  for (const auto& [name, u] : full_catalog()) {
    const WorldPoint x = random_point(rng);
    const FlowResult fr = flow(u, x, 0.0);
    observe(r, std::abs(fr.point.t - x.t));
    observe(r, max_abs(Vec3(fr.point.q - x.q)));
    observe(r, max_abs(Mat4(fr.jacobian - Mat4::Identity())));
  }
  return r;
}

CheckResult check_flow_time_exact() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11005u);
  for (const auto& [name, u] : full_catalog()) {
    for (double s : {0.37, -0.81, 1.0, -1.0, 0.001}) {
      const WorldPoint x = random_point(rng);
      observe(r, std::abs(flow(u, x, s).point.t - (x.t + s)));
    }
  }
  return r;
}

CheckResult check_flow_volume() {
  CheckResult r;
  std::mt19937_64 rng(0x51a11006u);
  for (const auto& [name, u] : incompressible_catalog()) {
    for (int i = 0; i < 5; ++i) {
      const WorldPoint x = random_point(rng);
      for (double s : {0.5, 1.0}) {
        const Mat4 jac = flow(u, x, s).jacobian;
        observe(r, std::abs(jac.block<3, 3>(1, 1).determinant() - 1.0));
      }
    }
  }
  return r;
}

// ---- observers ---------------------------------------------------------------

CheckResult check_split_roundtrip() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0001u);
  const RigidObserver observers[] = {check_inertial(), check_rotating()};
  for (const auto& obs : observers) {
    for (int i = 0; i < 100; ++i) {
      const WorldPoint x = random_point(rng, 0.0, 10.0);
      const SplitPoint sp = obs.split(x);
      const WorldPoint back = obs.unsplit(sp.t, sp.q);
      observe(r, std::max(std::abs(back.t - x.t), max_abs(Vec3(back.q - x.q))));
      const Vec3 q = random_vec3(rng, 2.0);
      const SplitPoint again = obs.split(obs.unsplit(x.t, q));
      observe(r, std::max(std::abs(again.t - x.t), max_abs(Vec3(again.q - q))));
    }
  }
  return r;
}

CheckResult check_dhp_identity() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0002u);
  const VelocityField shear = catalog_field("simple_shear");
  ObserverOptions opts;
  opts.horizon = 11.0;
  const RigidObserver observers[] = {
      check_inertial(), check_rotating(),
      RigidObserver::corotating(shear, WorldPoint{0.0, Vec3(0.0, 0.5, 0.0)}, opts)};
  for (const auto& obs : observers) {
    for (int i = 0; i < 50; ++i) {
      const double t = 10.0 * uniform_01(rng);
      const Vec3 q = random_vec3(rng, 2.0);
      const Mat4 dh = obs.split_jacobian(obs.unsplit(t, q));
      const Mat4 dp = obs.unsplit_jacobian(t, q);
      observe(r, max_abs(Mat4(dh * dp - Mat4::Identity())));
    }
  }
  return r;
}

CheckResult check_angvel_affine() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0003u);
  const RigidObserver obs = check_rotating();
  for (int i = 0; i < 50; ++i) {
    const WorldPoint x = random_point(rng, 0.0, 10.0);
    const Vec3 q = random_vec3(rng, 2.0);
    const Vec3 lhs = obs.velocity({x.t, x.q + q}) - obs.velocity(x);
    observe(r, max_abs(Vec3(lhs - obs.omega(x.t) * q)));
  }
  return r;
}

CheckResult check_angvel_gradient_fd() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0004u);
  const VelocityField vortex = catalog_field("planar_vortex");
  ObserverOptions opts;
  opts.horizon = 11.0;
  const RigidObserver observers[] = {
      check_rotating(),
      RigidObserver::corotating(vortex, WorldPoint{0.0, Vec3(0.5, 0.0, 0.0)}, opts)};
  for (const auto& obs : observers) {
    const VelocityField implied = obs.velocity_field();
    for (int i = 0; i < 25; ++i) {
      const WorldPoint x = random_point(rng, 0.0, 10.0);
      observe(r, max_abs(Mat3(implied.gradient(x.t, x.q) - obs.omega(x.t))));
    }
  }
  return r;
}

CheckResult check_rigidity() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0005u);
  const VelocityField vortex = catalog_field("planar_vortex");
  ObserverOptions opts;
  opts.horizon = 11.0;
  const RigidObserver observers[] = {
      check_rotating(),
      RigidObserver::corotating(vortex, WorldPoint{0.0, Vec3(0.5, 0.0, 0.0)}, opts)};
  for (const auto& obs : observers) {
    const VelocityField implied = obs.velocity_field();
    for (int pair = 0; pair < 3; ++pair) {
      WorldPoint a{0.0, random_vec3(rng, 2.0)};
      WorldPoint b{0.0, random_vec3(rng, 2.0)};
      const double d0 = (a.q - b.q).norm();
      // Follow the integral curves of the implied field and watch the
      // distance between the two space points.
      for (int leg = 0; leg < 4; ++leg) {
        a = flow_point(implied, a, 2.5);
        b = flow_point(implied, b, 2.5);
        observe(r, std::abs((a.q - b.q).norm() - d0));
      }
    }
  }
  return r;
}

CheckResult check_rotation_orthogonality() {
  CheckResult r;
  const VelocityField vortex = catalog_field("planar_vortex");
  ObserverOptions opts;
  opts.horizon = 11.0;
  const RigidObserver observers[] = {
      check_rotating(),
      RigidObserver::corotating(vortex, WorldPoint{0.0, Vec3(0.5, 0.0, 0.0)}, opts)};
  for (const auto& obs : observers) {
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.5 * i;
      const Mat3 rot = obs.rotation(t);
      observe(r, max_abs(Mat3(rot.transpose() * rot - Mat3::Identity())));
    }
  }
  return r;
}

CheckResult check_omega_rel_antisymmetry() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0006u);
  const VelocityField shear = catalog_field("simple_shear");
  const RigidObserver observers[] = {
      check_rotating(), RigidObserver::corotating(shear, WorldPoint{0.0, Vec3::Zero()})};
  for (const auto& obs : observers) {
    for (int i = 0; i < 20; ++i) {
      const double t = 10.0 * uniform_01(rng);
      const Mat3 w = obs.omega_rel(t);
      observe(r, max_abs(Mat3(w + w.transpose())));
    }
  }
  return r;
}

CheckResult check_nabu() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0007u);
  const RigidObserver obs = check_rotating();
  for (const auto& [name, u] : full_catalog()) {
    const RelVectorField v_rel = rel_velocity_field(obs, u);
    for (int i = 0; i < 10; ++i) {
      const double t = 2.0 * uniform_01(rng);
      const Vec3 q = random_vec3(rng, 1.5);
      const WorldPoint x = obs.unsplit(t, q);
      const Mat3 rot = obs.rotation(t);
      const Mat3 lhs = rot.transpose() * u.gradient(x.t, x.q) * rot;
      const Mat3 rhs = relfd::gradient(v_rel, t, q) + obs.omega_rel(t);
      observe(r, max_abs(Mat3(lhs - rhs)));
    }
  }
  return r;
}

CheckResult check_dcsp() {
  CheckResult r;
  std::mt19937_64 rng(0x0b5e0008u);
  const RigidObserver obs = check_rotating();
  const VectorField c = VectorField::space_from_polys(random_poly3(rng));
  const RelVectorField c_rel = rel_space_vector_field(obs, c);
  for (int i = 0; i < 20; ++i) {
    const double t = 2.0 * uniform_01(rng);
    const Vec3 q = random_vec3(rng, 1.5);
    const WorldPoint x = obs.unsplit(t, q);
    // Split of Dc as a mixed E x M* value...
    const Mat34 dc = c.derivative_components(x).block<3, 4>(1, 0);
    const RelMixedEM split = rel_mixed_EM(obs, dc, x);
    // ...against relative-coordinate finite differences.
    const Vec3 time_part =
        relfd::partial_t(c_rel, t, q) + obs.omega_rel(t) * c_rel(t, q);
    const Mat3 space_part = relfd::gradient(c_rel, t, q);
    observe(r, max_abs(Vec3(split.time - time_part)));
    observe(r, max_abs(Mat3(split.space - space_part)));
  }
  return r;
}

// ---- derivatives ----------------------------------------------------------------

CheckResult check_lie_u_u() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0001u);
  for (const auto& [name, u] : full_catalog()) {
    const VectorField cu = u.as_vector_field();
    for (int i = 0; i < 100; ++i) {
      const WorldPoint x = random_point(rng);
      const FourVector lie = lie_derivative(cu, u, x);
      observe(r, std::max(std::abs(lie.dt), max_abs(lie.dq)));
    }
  }
  return r;
}

/// One seeded test field of every kind, built from one generator so that a
/// fixed seed pins the whole family.
struct TestFields {
  ScalarField scalar;
  VectorField vector4;
  VectorField space_vector;
  CovectorField covector4;
  CovectorField space_covector;
  Tensor2Field con;
  Tensor2Field cov;
  Tensor2Field mix;
  Tensor2Field space_con;
  Tensor2Field space_cov;
  Tensor2Field space_mix;

  explicit TestFields(std::mt19937_64& rng)
      : scalar(ScalarField::from_poly(Poly4::random_cubic(rng))),
        vector4(VectorField::from_polys(random_poly4(rng))),
        space_vector(VectorField::space_from_polys(random_poly3(rng))),
        covector4(CovectorField::from_polys(random_poly4(rng))),
        space_covector(CovectorField::space_from_polys(random_poly3(rng))),
        con(Tensor2Field::from_polys(Variance::contravariant, random_poly16(rng))),
        cov(Tensor2Field::from_polys(Variance::covariant, random_poly16(rng))),
        mix(Tensor2Field::from_polys(Variance::mixed, random_poly16(rng))),
        space_con(Tensor2Field::space_from_polys(Variance::contravariant, random_poly9(rng))),
        space_cov(Tensor2Field::space_from_polys(Variance::covariant, random_poly9(rng))),
        space_mix(Tensor2Field::space_from_polys(Variance::mixed, random_poly9(rng))) {}
};

double lie_vs_oracle_all_kinds(const TestFields& f, const VelocityField& u, const WorldPoint& x,
                               const OracleConfig& cfg) {
  double worst = 0.0;
  auto track = [&](double v) { worst = std::max(worst, v); };
  track(std::abs(lie_derivative(f.scalar, u, x) - lie_oracle(f.scalar, u, x, cfg)));
  track(max_abs(Vec4(lie_derivative(f.vector4, u, x).vec4() - lie_oracle(f.vector4, u, x, cfg).vec4())));
  track(max_abs(Vec4(lie_derivative(f.space_vector, u, x).vec4() -
                     lie_oracle(f.space_vector, u, x, cfg).vec4())));
  track(max_abs(Vec4(lie_derivative(f.covector4, u, x).vec4() -
                     lie_oracle(f.covector4, u, x, cfg).vec4())));
  track(max_abs(Vec4(lie_derivative(f.space_covector, u, x).vec4() -
                     lie_oracle(f.space_covector, u, x, cfg).vec4())));
  for (const Tensor2Field* t : {&f.con, &f.cov, &f.mix, &f.space_con, &f.space_cov, &f.space_mix}) {
    track(max_abs(Mat4(lie_derivative(*t, u, x).components() -
                       lie_oracle(*t, u, x, cfg).components())));
  }
  return worst;
}

CheckResult check_lie_oracle_equivalence() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0002u);
  const OracleConfig cfg;
  for (const auto& [name, u] : full_catalog()) {
    const TestFields f(rng);
    for (int i = 0; i < 50; ++i) {
      const WorldPoint x = random_point(rng);
      observe(r, lie_vs_oracle_all_kinds(f, u, x, cfg));
    }
  }
  return r;
}

CheckResult check_oracle_convergence() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0003u);
  const double steps[3] = {1e-2, 1e-3, 1e-4};
  for (const auto& [name, u] : oracle_catalog()) {
    const TestFields f(rng);
    std::vector<WorldPoint> points;
    for (int i = 0; i < 5; ++i) points.push_back(random_point(rng));

    // Max closed-vs-oracle error per probe step, one family per Lie kind.
    auto slope_of = [&](auto&& error_at) {
      double err[3];
      for (int k = 0; k < 3; ++k) {
        OracleConfig cfg;
        cfg.s_step = steps[k];
        cfg.flow_step = steps[k] / 10.0;
        err[k] = 0.0;
        for (const WorldPoint& x : points) err[k] = std::max(err[k], error_at(x, cfg));
      }
      return (std::log(err[0]) - std::log(err[2])) / (std::log(steps[0]) - std::log(steps[2]));
    };

    auto vec_err = [&](const VectorField& c) {
      return [&u, &c](const WorldPoint& x, const OracleConfig& cfg) {
        return max_abs(
            Vec4(lie_derivative(c, u, x).vec4() - lie_oracle(c, u, x, cfg).vec4()));
      };
    };
    auto cov_err = [&](const CovectorField& k) {
      return [&u, &k](const WorldPoint& x, const OracleConfig& cfg) {
        return max_abs(
            Vec4(lie_derivative(k, u, x).vec4() - lie_oracle(k, u, x, cfg).vec4()));
      };
    };
    auto ten_err = [&](const Tensor2Field& t) {
      return [&u, &t](const WorldPoint& x, const OracleConfig& cfg) {
        return max_abs(
            Mat4(lie_derivative(t, u, x).components() - lie_oracle(t, u, x, cfg).components()));
      };
    };

    observe(r, std::abs(slope_of(vec_err(f.vector4)) - 2.0));
    observe(r, std::abs(slope_of(cov_err(f.covector4)) - 2.0));
    observe(r, std::abs(slope_of(ten_err(f.con)) - 2.0));
    observe(r, std::abs(slope_of(ten_err(f.cov)) - 2.0));
    observe(r, std::abs(slope_of(ten_err(f.mix)) - 2.0));
  }
  return r;
}

CheckResult check_material_vs_lie() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0004u);
  for (const auto& [name, u] : full_catalog()) {
    const TestFields f(rng);
    for (int i = 0; i < 10; ++i) {
      const WorldPoint x = random_point(rng);
      const Mat4 g = u.derivative4(x);

      const Vec4 c = f.vector4(x).vec4();
      observe(r, max_abs(Vec4(lie_derivative(f.vector4, u, x).vec4() + g * c -
                              material_derivative(f.vector4, u, x).vec4())));
      const Vec4 k = f.covector4(x).vec4();
      observe(r, max_abs(Vec4(lie_derivative(f.covector4, u, x).vec4() - g.transpose() * k -
                              material_derivative(f.covector4, u, x).vec4())));
      const Mat4 tc = f.con.components(x);
      observe(r, max_abs(Mat4(lie_derivative(f.con, u, x).components() + g * tc +
                              tc * g.transpose() -
                              material_derivative(f.con, u, x).components())));
      const Mat4 tw = f.cov.components(x);
      observe(r, max_abs(Mat4(lie_derivative(f.cov, u, x).components() - g.transpose() * tw -
                              tw * g - material_derivative(f.cov, u, x).components())));
      const Mat4 ta = f.mix.components(x);
      observe(r, max_abs(Mat4(lie_derivative(f.mix, u, x).components() + g * ta - ta * g -
                              material_derivative(f.mix, u, x).components())));
    }
  }
  return r;
}

CheckResult check_scalar_consistency() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0005u);
  for (const auto& [name, u] : full_catalog()) {
    const ScalarField f = ScalarField::from_poly(Poly4::random_cubic(rng));
    for (int i = 0; i < 10; ++i) {
      const WorldPoint x = random_point(rng);
      observe(r, std::abs(lie_derivative(f, u, x) - material_derivative(f, u, x)));
    }
  }
  return r;
}

CheckResult check_mattime_objectivity() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0006u);
  const RigidObserver obs = check_rotating(3.0);
  const VelocityField fields[] = {catalog_field("simple_shear"), catalog_field("planar_vortex")};
  for (const VelocityField& u : fields) {
    const VectorField c = VectorField::space_from_polys(random_poly3(rng));
    const RelVectorField c_rel = rel_space_vector_field(obs, c);
    const RelVectorField v_rel = rel_velocity_field(obs, u);
    for (int i = 0; i < 15; ++i) {
      const double t = 2.0 * uniform_01(rng);
      const Vec3 q = random_vec3(rng, 1.5);
      const WorldPoint x = obs.unsplit(t, q);
      const Vec3 relative = material_rel(obs, c_rel, v_rel, t, q);
      const Vec3 absolute =
          rel_space_vector(obs, material_derivative(c, u, x).dq, t);
      observe(r, max_abs(Vec3(relative - absolute)));
    }
  }
  return r;
}

CheckResult check_frame_equivalence() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0007u);
  const RigidObserver observers[] = {check_inertial(), check_rotating(3.0)};
  const VelocityField fields[] = {catalog_field("simple_shear"),
                                  catalog_field("time_ramped_shear"),
                                  catalog_field("rigid_rotation")};
  for (const VelocityField& u : fields) {
    const VectorField c = VectorField::space_from_polys(random_poly3(rng));
    const CovectorField k = CovectorField::space_from_polys(random_poly3(rng));
    const Tensor2Field tcon = Tensor2Field::space_from_polys(Variance::contravariant, random_poly9(rng));
    const Tensor2Field tcov = Tensor2Field::space_from_polys(Variance::covariant, random_poly9(rng));
    const Tensor2Field tmix = Tensor2Field::space_from_polys(Variance::mixed, random_poly9(rng));
    for (const RigidObserver& obs : observers) {
      const RelVectorField v_rel = rel_velocity_field(obs, u);
      const RelVectorField c_rel = rel_space_vector_field(obs, c);
      const RelVectorField k_rel = rel_space_covector_field(obs, k);
      const RelTensorField con_rel = rel_space_tensor_field(obs, tcon);
      const RelTensorField cov_rel = rel_space_tensor_field(obs, tcov);
      const RelTensorField mix_rel = rel_space_tensor_field(obs, tmix);
      for (int i = 0; i < 8; ++i) {
        const double t = 2.0 * uniform_01(rng);
        const Vec3 q = random_vec3(rng, 1.5);
        const WorldPoint x = obs.unsplit(t, q);
        const Mat3 rt = obs.rotation(t).transpose();

        observe(r, max_abs(Vec3(upper_convected_rel(v_rel, c_rel, t, q) -
                                rt * lie_derivative(c, u, x).dq)));
        observe(r, max_abs(Vec3(lower_convected_rel(v_rel, k_rel, t, q) -
                                rt * lie_derivative(k, u, x).k)));
        observe(r, max_abs(Vec3(jaumann_rel(v_rel, c_rel, t, q) - rt * jaumann(c, u, x))));
        observe(r, max_abs(Mat3(upper_convected_tensor_rel(v_rel, con_rel, t, q) -
                                rel_tensor2(obs, lie_derivative(tcon, u, x), x).ss)));
        observe(r, max_abs(Mat3(lower_convected_tensor_rel(v_rel, cov_rel, t, q) -
                                rel_tensor2(obs, lie_derivative(tcov, u, x), x).ss)));
        observe(r, max_abs(Mat3(mixed_convected_tensor_rel(v_rel, mix_rel, t, q) -
                                rel_tensor2(obs, lie_derivative(tmix, u, x), x).ss)));
      }
    }
  }
  return r;
}

CheckResult check_nonspacelike_components() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0008u);
  const VelocityField u = catalog_field("time_ramped_shear", {{"a", 1.0}});
  const VectorField c = VectorField::space_from_polys(random_poly3(rng));
  const CovectorField k = CovectorField::space_from_polys(random_poly3(rng));
  const Tensor2Field tmix = Tensor2Field::space_from_polys(Variance::mixed, random_poly9(rng));
  const Tensor2Field tcon =
      Tensor2Field::space_from_polys(Variance::contravariant, random_poly9(rng));
  for (int i = 0; i < 25; ++i) {
    const WorldPoint x = random_point(rng);
    const Vec3 du0 = u.partial_t(x.t, x.q);

    // Spacelike vectors stay spacelike under the Lie derivative.
    observe(r, std::abs(lie_derivative(c, u, x).dt));
    // Spacelike covectors acquire the time component k_j ∂₀u^j.
    const FourCovector lk = lie_derivative(k, u, x);
    observe(r, std::abs(lk.k0 - k(x).k.dot(du0)));
    // Mixed space tensors acquire the space-time column a^i_k ∂₀u^k.
    const Mat4 la = lie_derivative(tmix, u, x).components();
    observe(r, max_abs(Vec3(la.block<3, 1>(1, 0) - tmix.space_components(x) * du0)));
    observe(r, std::abs(la(0, 0)));
    observe(r, max_abs(Vec3(la.block<1, 3>(0, 1).transpose())));
    // Contravariant space tensors stay spacelike.
    const Mat4 lt = lie_derivative(tcon, u, x).components();
    observe(r, max_abs(Vec4(lt.row(0).transpose())));
    observe(r, max_abs(Vec4(lt.col(0))));
  }
  return r;
}

CheckResult check_leibniz() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d0009u);
  const VelocityField fields[] = {catalog_field("simple_shear"), catalog_field("planar_vortex"),
                                  catalog_field("rigid_rotation")};
  for (const VelocityField& u : fields) {
    const VectorField c = VectorField::from_polys(random_poly4(rng));
    const CovectorField k = CovectorField::from_polys(random_poly4(rng));
    // The pairing k(c) as a plain scalar field (finite-difference path).
    const ScalarField pairing([c, k](const WorldPoint& x) { return k(x)(c(x)); });
    for (int i = 0; i < 10; ++i) {
      const WorldPoint x = random_point(rng);
      const double lhs = lie_derivative(pairing, u, x);
      const double rhs = lie_derivative(k, u, x)(c(x)) + k(x)(lie_derivative(c, u, x));
      observe(r, std::abs(lhs - rhs));
    }
  }
  return r;
}

CheckResult check_jaumann_decomposition() {
  CheckResult r;
  std::mt19937_64 rng(0xd00d000au);
  const VelocityField fields[] = {catalog_field("simple_shear"), catalog_field("planar_vortex"),
                                  catalog_field("rigid_rotation")};
  for (const VelocityField& u : fields) {
    const auto comp = random_poly3(rng);
    const VectorField c = VectorField::space_from_polys(comp);
    // flat(c) has the same components through the Euclidean identification.
    const CovectorField c_flat = CovectorField::space_from_polys(comp);
    for (int i = 0; i < 20; ++i) {
      const WorldPoint x = random_point(rng);
      const Vec3 upper = lie_derivative(c, u, x).dq;
      const Vec3 lower = lie_derivative(c_flat, u, x).k;  // restricted to E
      observe(r, max_abs(Vec3(jaumann(c, u, x) - 0.5 * (upper + lower))));
    }
  }
  return r;
}

CheckResult check_jaumann_corotating_rotation() {
  CheckResult r;
  const VelocityField u = catalog_field("rigid_rotation");
  const VectorField c = VectorField::constant_space(Vec3::UnitX());
  std::mt19937_64 rng(0xd00d000bu);
  const VectorField cpoly = VectorField::space_from_polys(random_poly3(rng));
  const std::vector<Instant> times = {0.0, 0.25, 0.5, 0.75, 1.0};
  ObserverOptions opts;
  opts.horizon = 1.5;
  const WorldPoint o{0.0, Vec3(0.5, 0.0, 0.0)};
  observe(r, jaumann_corotating_residual(u, o, c, times, opts));
  observe(r, jaumann_corotating_residual(u, o, cpoly, times, opts));
  return r;
}

CheckResult check_jaumann_corotating_vortex() {
  CheckResult r;
  const VelocityField u = catalog_field("planar_vortex");
  const VectorField c = VectorField::constant_space(Vec3::UnitX());
  std::mt19937_64 rng(0xd00d000cu);
  const VectorField cpoly = VectorField::space_from_polys(random_poly3(rng));
  const std::vector<Instant> times = {0.0, 0.5, 1.0};
  ObserverOptions opts;
  opts.horizon = 1.5;
  const WorldPoint o{0.0, Vec3(0.5, 0.0, 0.0)};
  observe(r, jaumann_corotating_residual(u, o, c, times, opts));
  observe(r, jaumann_corotating_residual(u, o, cpoly, times, opts));
  return r;
}

CheckResult check_jaumann_corotating_constant() {
  CheckResult r;
  const VelocityField u = catalog_field("constant", {{"wx", 0.4}, {"wy", -0.3}, {"wz", 0.2}});
  std::mt19937_64 rng(0xd00d000du);
  const VectorField cpoly = VectorField::space_from_polys(random_poly3(rng));
  const std::vector<Instant> times = {0.0, 0.5, 1.0};
  ObserverOptions opts;
  opts.horizon = 1.5;
  observe(r, jaumann_corotating_residual(u, WorldPoint{0.0, Vec3(0.2, 0.1, 0.0)}, cpoly, times,
                                         opts));
  return r;
}

CheckResult check_deformation_lie() {
  CheckResult r;
  const RigidObserver observers[] = {check_inertial(), check_rotating(3.0)};
  const VelocityField fields[] = {catalog_field("simple_shear"),
                                  catalog_field("rigid_rotation")};
  const Vec3 points[] = {Vec3(0.0, 1.0, 0.0), Vec3(0.5, -0.5, 0.3)};
  for (const RigidObserver& obs : observers) {
    for (const VelocityField& u : fields) {
      for (const Vec3& X : points) {
        for (double s : {0.1, 0.25, 0.5, 0.75, 1.0}) {
          observe(r, deformation_lie_check(u, obs, 0.0, X, s));
        }
      }
    }
  }
  return r;
}

CheckResult check_deformation_volume() {
  CheckResult r;
  const RigidObserver obs = check_rotating(3.0);
  const Vec3 points[] = {Vec3(0.0, 1.0, 0.0), Vec3(0.5, -0.5, 0.3)};
  for (const auto& [name, u] : incompressible_catalog()) {
    for (const Vec3& X : points) {
      for (double s : {0.5, 1.0}) {
        observe(r, std::abs(deformation_gradient(u, obs, 0.0, X, s).determinant() - 1.0));
      }
    }
  }
  return r;
}

}  // namespace

std::vector<Check> standard_checks() {
  std::vector<Check> cs = {
      {"fields.catalog_jacobian_fd",
       "analytic catalog derivatives match central finite differences", 1e-7,
       check_catalog_jacobian_fd},
      {"fields.flow_identity", "flow at s = 0 is the identity with identity Jacobian", 0.0,
       check_flow_identity},
      {"fields.flow_jacobian_fd",
       "integrated flow Jacobian matches finite differences of the flow map", 1e-6,
       check_flow_jacobian_fd},
      {"fields.flow_semigroup", "flow composition law and Jacobian chain rule", 1e-8,
       check_flow_semigroup},
      {"fields.flow_time_exact", "flow advances time exactly by the parameter", 0.0,
       check_flow_time_exact},
      {"fields.flow_volume",
       "divergence-free catalog flows preserve the spatial volume element", 1e-7,
       check_flow_volume},
      {"observers.angvel_affine",
       "observer velocity field is affine with slope omega", 1e-12, check_angvel_affine},
      {"observers.angvel_gradient_fd",
       "finite-difference spatial gradient of the observer field equals omega", 1e-7,
       check_angvel_gradient_fd},
      {"observers.dcsp",
       "split of the derivative of a spacelike field matches relative finite differences",
       1e-6, check_dcsp},
      {"observers.dhp_identity",
       "composite of split and unsplit Jacobians is the identity", 1e-9, check_dhp_identity},
      {"observers.nabu",
       "relative velocity gradient plus relative angular velocity reconstructs grad u", 1e-6,
       check_nabu},
      {"observers.omega_rel_antisymmetry", "relative angular velocity is antisymmetric",
       1e-12, check_omega_rel_antisymmetry},
      {"observers.rigidity",
       "distances between observer space points are constant along the motion", 1e-8,
       check_rigidity},
      {"observers.rotation_orthogonality",
       "integrated frame rotation stays orthogonal over long spans", 1e-9,
       check_rotation_orthogonality},
      {"observers.split_roundtrip", "split and unsplit invert each other", 1e-9,
       check_split_roundtrip},
      {"derivatives.deformation_lie",
       "deformation gradient rate equals relative velocity gradient times F", 1e-6,
       check_deformation_lie},
      {"derivatives.deformation_volume",
       "deformation gradient of incompressible flows has unit determinant", 1e-7,
       check_deformation_volume},
      {"derivatives.frame_equivalence",
       "relative convected formulas match splits of the absolute Lie derivatives", 1e-6,
       check_frame_equivalence},
      {"derivatives.jaumann_corotating_constant",
       "corotating identity for a constant velocity field", 1e-8,
       check_jaumann_corotating_constant},
      {"derivatives.jaumann_corotating_rotation",
       "corotating identity along a rigid rotation", 1e-6, check_jaumann_corotating_rotation},
      {"derivatives.jaumann_corotating_vortex",
       "corotating identity along the planar vortex", 1e-5, check_jaumann_corotating_vortex},
      {"derivatives.jaumann_decomposition",
       "Jaumann derivative is the mean of the upper and lower convected derivatives", 1e-9,
       check_jaumann_decomposition},
      {"derivatives.leibniz", "Lie derivative satisfies the Leibniz rule on pairings", 1e-7,
       check_leibniz},
      {"derivatives.lie_oracle_equivalence",
       "closed-form Lie derivatives match the flow-pullback oracle", 1e-6,
       check_lie_oracle_equivalence},
      {"derivatives.lie_u_u", "the Lie derivative of the velocity along itself vanishes",
       1e-8, check_lie_u_u},
      {"derivatives.material_vs_lie",
       "Lie derivative minus its correction terms is the material derivative", 1e-9,
       check_material_vs_lie},
      {"derivatives.mattime_objectivity",
       "relative material-derivative formula matches the split of the absolute result", 1e-6,
       check_mattime_objectivity},
      {"derivatives.nonspacelike_components",
       "non-spacelike Lie components match their indexed formulas", 1e-8,
       check_nonspacelike_components},
      {"derivatives.oracle_convergence",
       "oracle error shrinks at second order in the probe step", 0.1,
       check_oracle_convergence},
      {"derivatives.scalar_consistency",
       "scalar Lie and material derivatives are the same computation", 0.0,
       check_scalar_consistency},
  };
  std::sort(cs.begin(), cs.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  return cs;
}

CheckReport run_check(const Check& check) {
  CheckReport report;
  report.id = check.id;
  report.description = check.description;
  report.tolerance = check.tolerance;
  const auto start = std::chrono::steady_clock::now();
  const CheckResult result = check.run();
  const auto stop = std::chrono::steady_clock::now();
  report.max_residual = result.max_residual;
  report.points = result.points;
  report.passed = result.max_residual <= check.tolerance;
  report.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return report;
}

std::vector<CheckReport> run_checks(const std::string& filter) {
  std::vector<CheckReport> reports;
  for (const Check& check : standard_checks()) {
    if (!filter.empty() && check.id.find(filter) == std::string::npos) continue;
    reports.push_back(run_check(check));
  }
  return reports;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.passed; });
}

}  // namespace stkin::checks
