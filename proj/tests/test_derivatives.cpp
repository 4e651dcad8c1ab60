#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "stkin/derivatives.hpp"

using namespace stkin;

TEST_CASE("material derivative: transport of simple fields") {
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});

  // f = q_x advected by the shear: rate = v_x = kappa q_y.
  const ScalarField f = ScalarField::from_poly(Poly4::coordinate(1));
  CHECK(material_derivative(f, shear, WorldPoint{0.0, Vec3(0, 2, 0)}) == doctest::Approx(2.0));

  // Constant fields have zero material derivative, for any carrier.
  const Tensor2Field ident = Tensor2Field::constant_space(Variance::contravariant,
                                                          Mat3::Identity());
  const Tensor2 dt = material_derivative(ident, shear, WorldPoint{0.3, Vec3(1, 2, 3)});
  CHECK(dt.variance() == Variance::contravariant);
  CHECK(max_abs(dt.components()) <= 1e-12);

  // c = q_y e_x carried by a rigid rotation: rate = u_y e_x.
  const VectorField c = VectorField::space_from_polys(
      {Poly4::coordinate(2), Poly4::constant(0.0), Poly4::constant(0.0)});
  const VelocityField rot = catalog_field("rigid_rotation", {{"omega0", 1.0}});
  const FourVector dc = material_derivative(c, rot, WorldPoint{0.0, Vec3(1, 0, 0)});
  CHECK(dc.dt == doctest::Approx(0.0));
  CHECK(max_abs(Vec3(dc.dq - Vec3(1, 0, 0))) <= 1e-9);

  // For scalars the Lie derivative is the material derivative.
  CHECK(lie_derivative(f, shear, WorldPoint{0.0, Vec3(0, 2, 0)}) == doctest::Approx(2.0));
}

TEST_CASE("lie derivative: closed-form examples") {
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});
  const WorldPoint x{0.0, Vec3(0.4, -0.2, 0.9)};

  // Constant spacelike vector e_y: L_u c = -(grad u) c = -e_x.
  const VectorField ey = VectorField::constant_space(Vec3(0, 1, 0));
  const FourVector lc = lie_derivative(ey, shear, x);
  CHECK(lc.dt == doctest::Approx(0.0));
  CHECK(max_abs(Vec3(lc.dq - Vec3(-1, 0, 0))) <= 1e-9);

  // Constant spacelike covector e_x^*: L_u k = (grad u)^T k = e_y^*.
  const CovectorField ex = CovectorField::constant_space(Vec3(1, 0, 0));
  const FourCovector lk = lie_derivative(ex, shear, x);
  CHECK(lk.k0 == doctest::Approx(0.0));
  CHECK(max_abs(Vec3(lk.k - Vec3(0, 1, 0))) <= 1e-9);

  // A time-dependent carrier pushes a time component into the covector.
  const VelocityField ramp = catalog_field("time_ramped_shear", {{"a", 1.0}});
  const FourCovector lkt = lie_derivative(ex, ramp, x);
  CHECK(lkt.k0 == doctest::Approx(1.0));
  CHECK(max_abs(lkt.k) <= 1e-9);

  // Identity contravariant space tensor under the shear: the Lie derivative
  // is minus twice the symmetrized gradient.
  const Tensor2Field ident = Tensor2Field::constant_space(Variance::contravariant,
                                                          Mat3::Identity());
  const Tensor2 lt = lie_derivative(ident, shear, x);
  Mat4 expected = Mat4::Zero();
  expected(1, 2) = -1.0;
  expected(2, 1) = -1.0;
  CHECK(max_abs(Mat4(lt.components() - expected)) <= 1e-9);
  CHECK(lt.variance() == Variance::contravariant);

  // The mixed identity commutes with every gradient: its Lie derivative
  // keeps only the time-column block a steady carrier leaves at zero.
  const Tensor2Field mident = Tensor2Field::constant_space(Variance::mixed, Mat3::Identity());
  CHECK(max_abs(lie_derivative(mident, shear, x).components()) <= 1e-9);
  const Tensor2 mt = lie_derivative(mident, ramp, x);
  CHECK(mt(1, 0) == doctest::Approx(1.0));  // A grad_t v picks up the ramp rate
  CHECK(max_abs(mt.components().block<3, 3>(1, 1)) <= 1e-9);

  // L_u u = 0, exactly the flow-invariance of the carrier itself.
  const VelocityField vortex = catalog_field("planar_vortex");
  const FourVector self = lie_derivative(vortex.as_vector_field(), vortex, x);
  CHECK(std::abs(self.dt) <= 1e-9);
  CHECK(max_abs(self.dq) <= 1e-7);
}

TEST_CASE("oracle configuration is validated") {
  OracleConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.s_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.flow_step = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.fd_h = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.s_step = 1e-5;  // equal to flow_step: probe error would swamp the quotient
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("flow-pullback oracles recover the closed forms") {
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});
  const WorldPoint x{0.0, Vec3(0, 1, 0)};

  const VectorField ey = VectorField::constant_space(Vec3(0, 1, 0));
  const FourVector probe = lie_oracle(ey, shear, x);
  CHECK(std::abs(probe.dt) <= 1e-7);
  CHECK(max_abs(Vec3(probe.dq - Vec3(-1, 0, 0))) <= 1e-7);

  // Everything constant: the oracle difference quotient is exactly zero.
  const VelocityField still = catalog_field("constant", {{"wx", 0.3}});
  CHECK(max_abs(lie_oracle(ey, still, x).dq) <= 1e-10);
  CHECK(std::abs(material_oracle(ScalarField::constant(4.0), still, x)) <= 1e-10);

  // Material oracle against the closed form on a polynomial tensor field.
  std::mt19937_64 rng(40);
  std::array<Poly4, 16> comp;
  for (auto& p : comp) p = Poly4::random_cubic(rng);
  const Tensor2Field t = Tensor2Field::from_polys(Variance::covariant, comp);
  const VelocityField vortex = catalog_field("planar_vortex");
  const WorldPoint y{0.4, Vec3(0.3, -0.6, 0.2)};
  const Tensor2 closed = material_derivative(t, vortex, y);
  const Tensor2 probed = material_oracle(t, vortex, y);
  CHECK(max_abs(Mat4(closed.components() - probed.components())) <= 1e-6);

  // Lie oracle on the same field agrees too, and carries the variance.
  const Tensor2 lclosed = lie_derivative(t, vortex, y);
  const Tensor2 lprobed = lie_oracle(t, vortex, y);
  CHECK(lprobed.variance() == Variance::covariant);
  CHECK(max_abs(Mat4(lclosed.components() - lprobed.components())) <= 1e-6);
}

TEST_CASE("convected rates in observer coordinates: shear examples") {
  // Inertial observer at rest: relative coordinates are the chart ones.
  const RigidObserver rest = RigidObserver::inertial();
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});
  const RelVectorField v = rel_velocity_field(rest, shear);
  const RelVectorField ey = [](Instant, const Vec3&) { return Vec3(0, 1, 0); };

  const Vec3 q(0.3, 0.7, -0.1);
  CHECK(max_abs(Vec3(upper_convected_rel(v, ey, 0.0, q) - Vec3(-1, 0, 0))) <= 1e-9);
  CHECK(max_abs(lower_convected_rel(v, ey, 0.0, q)) <= 1e-9);
  CHECK(max_abs(Vec3(jaumann_rel(v, ey, 0.0, q) - Vec3(-0.5, 0, 0))) <= 1e-9);

  // The Jaumann rate is the mean of the upper and lower convected rates.
  std::mt19937_64 rng(41);
  const RelVectorField wavy = [](Instant t, const Vec3& p) {
    return Vec3(std::sin(p.y() + t), p.x() * p.z(), std::cos(p.x()));
  };
  for (int i = 0; i < 10; ++i) {
    const Vec3 p(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng));
    const double t = uniform_01(rng);
    const Vec3 mean = 0.5 * (upper_convected_rel(v, wavy, t, p) +
                             lower_convected_rel(v, wavy, t, p));
    CHECK(max_abs(Vec3(jaumann_rel(v, wavy, t, p) - mean)) <= 1e-8);
  }

  // Comoving case v = 0: all three rates collapse to the bare time partial.
  const RelVectorField zero = [](Instant, const Vec3&) { return Vec3::Zero(); };
  const Vec3 dt = relfd::partial_t(wavy, 0.4, q);
  CHECK(max_abs(Vec3(upper_convected_rel(zero, wavy, 0.4, q) - dt)) <= 1e-8);
  CHECK(max_abs(Vec3(lower_convected_rel(zero, wavy, 0.4, q) - dt)) <= 1e-8);
  CHECK(max_abs(Vec3(jaumann_rel(zero, wavy, 0.4, q) - dt)) <= 1e-8);
}

TEST_CASE("convected tensor rates: identity under the shear") {
  const RigidObserver rest = RigidObserver::inertial();
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});
  const RelVectorField v = rel_velocity_field(rest, shear);
  const RelTensorField ident = [](Instant, const Vec3&) { return Mat3::Identity().eval(); };
  const Vec3 q(0.2, -0.5, 0.8);

  Mat3 sym = Mat3::Zero();
  sym(0, 1) = 1.0;
  sym(1, 0) = 1.0;
  CHECK(max_abs(Mat3(upper_convected_tensor_rel(v, ident, 0.0, q) + sym)) <= 1e-8);
  CHECK(max_abs(Mat3(lower_convected_tensor_rel(v, ident, 0.0, q) - sym)) <= 1e-8);
  // The mixed rate of the identity vanishes for every carrier.
  CHECK(max_abs(mixed_convected_tensor_rel(v, ident, 0.0, q)) <= 1e-8);
  const VelocityField vortex = catalog_field("planar_vortex");
  const RelVectorField vv = rel_velocity_field(rest, vortex);
  CHECK(max_abs(mixed_convected_tensor_rel(vv, ident, 0.3, q)) <= 1e-8);
}

TEST_CASE("jaumann rate and the corotating identity") {
  const VelocityField rot = catalog_field("rigid_rotation", {{"omega0", 1.0}});
  const WorldPoint x{0.0, Vec3(0.4, 0.1, 0.0)};

  // Constant e_x under a rigid rotation turns with rate -e_y... seen
  // against the co-rotating trihedron the vector appears to turn backwards.
  const VectorField ex = VectorField::constant_space(Vec3(1, 0, 0));
  CHECK(max_abs(Vec3(jaumann(ex, rot, x) - Vec3(0, -1, 0))) <= 1e-8);

  // The corotating identity: d/dt of the relative components equals the
  // relative form of the Jaumann rate, along the carrier particle.
  const std::array<Instant, 3> times{0.0, 0.25, 0.5};
  ObserverOptions opts;
  opts.horizon = 1.5;
  CHECK(jaumann_corotating_residual(rot, WorldPoint{0.0, Vec3(0.5, 0, 0)}, ex, times, opts) <=
        1e-6);

  const VelocityField vortex = catalog_field("planar_vortex");
  CHECK(jaumann_corotating_residual(vortex, WorldPoint{0.0, Vec3(0.5, 0, 0)}, ex, times, opts) <=
        1e-5);
}

TEST_CASE("deformation gradient of simple flows") {
  const RigidObserver rest = RigidObserver::inertial();
  const VelocityField shear = catalog_field("simple_shear", {{"kappa", 1.0}});

  Mat3 expected = Mat3::Identity();
  expected(0, 1) = 0.5;
  CHECK(max_abs(Mat3(deformation_gradient(shear, rest, 0.0, Vec3(0, 1, 0), 0.5) - expected)) <=
        1e-8);
  CHECK(max_abs(Mat3(deformation_gradient(shear, rest, 0.0, Vec3(2, -1, 3), 0.0) -
                     Mat3::Identity())) <= 1e-10);

  const VelocityField rot = catalog_field("rigid_rotation", {{"omega0", 1.0}});
  const Mat3 half_turn = deformation_gradient(rot, rest, 0.0, Vec3(1, 0, 0), M_PI);
  CHECK(max_abs(Mat3(half_turn - rotation_about(Vec3(0, 0, 1), M_PI))) <= 1e-7);
  CHECK(half_turn.determinant() == doctest::Approx(1.0).epsilon(1e-9));

  // Rate equation F' = (grad v) F, checked at several parameters.
  for (const double s : {0.0, 0.3, 0.8}) {
    CHECK(deformation_lie_check(shear, rest, 0.0, Vec3(0.5, 0.5, 0), s) <= 1e-6);
    CHECK(deformation_lie_check(rot, rest, 0.0, Vec3(0.5, 0.5, 0), s) <= 1e-6);
  }

  // Seen from the corotating observer of a rigid rotation the medium is
  // frozen: F stays the identity.
  const RigidObserver riding = RigidObserver::corotating(rot, WorldPoint{});
  CHECK(max_abs(Mat3(deformation_gradient(rot, riding, 0.0, Vec3(0.7, 0.2, 0), 1.0) -
                     Mat3::Identity())) <= 1e-6);
}

TEST_CASE("relative material derivative matches the split absolute one") {
  const VelocityField rot = catalog_field("rigid_rotation", {{"omega0", 1.0}});
  const RigidObserver riding = RigidObserver::corotating(rot, WorldPoint{});

  // A constant absolute vector is materially steady; its relative material
  // derivative must vanish even though its relative components rotate.
  const RelVectorField c_rel = [&riding](Instant t, const Vec3&) {
    return Vec3(riding.rotation(t).transpose() * Vec3(1, 0, 0));
  };
  const RelVectorField v_rel = rel_velocity_field(riding, rot);
  CHECK(max_abs(material_rel(riding, c_rel, v_rel, 0.7, Vec3(0.4, -0.3, 0.2))) <= 1e-7);
}
