#include <doctest.h>

#include <random>

#include "stkin/poly.hpp"
#include "stkin/spacetime.hpp"

using namespace stkin;

TEST_CASE("time evaluation and time span") {
  CHECK(time_eval(WorldPoint{2.0, Vec3(1, 0, 0)}) == 2.0);
  CHECK(time_eval(WorldPoint{0.0, Vec3(5, 5, 5)}) == 0.0);
  const WorldPoint x{1.5, Vec3(0.5, -2.0, 3.0)};
  const FourVector d{3.0, Vec3(1, 2, 3)};
  CHECK(time_eval(x + d) - time_eval(x) == tau_of(d));
  CHECK(tau_of(FourVector{1.0, Vec3::Zero()}) == 1.0);
  CHECK(tau_of(FourVector{0.0, Vec3(1, 2, 3)}) == 0.0);
  const FourVector v{1.0, Vec3(1, 0, 0)};
  const FourVector w{2.0, Vec3(0, 1, 0)};
  CHECK(tau_of(2.0 * v + (-1.0) * w) == doctest::Approx(0.0));
  CHECK(is_spacelike(2.0 * v + (-1.0) * w));
}

TEST_CASE("time span is linear on random vectors") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const FourVector v{uniform_pm1(rng), Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng))};
    const FourVector w{uniform_pm1(rng), Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng))};
    const double a = uniform_pm1(rng);
    const double b = uniform_pm1(rng);
    CHECK(tau_of(a * v + b * w) == doctest::Approx(a * tau_of(v) + b * tau_of(w)));
  }
}

TEST_CASE("euclidean structure on the spacelike subspace") {
  CHECK(euclid_dot({Vec3(1, 0, 0)}, {Vec3(1, 0, 0)}) == 1.0);
  CHECK(euclid_dot({Vec3(1, 2, 2)}, {Vec3(1, 2, 2)}) == 9.0);
  CHECK(norm(SpaceVector{Vec3(1, 2, 2)}) == doctest::Approx(3.0));
  CHECK(euclid_dot({Vec3(1, 0, 0)}, {Vec3(0, 1, 0)}) == 0.0);

  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const SpaceVector a{Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng))};
    const SpaceVector b{Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng))};
    CHECK(euclid_dot(a, b) == doctest::Approx(euclid_dot(b, a)));
    if (a.q.norm() > 0) CHECK(euclid_dot(a, a) > 0.0);
    const double s = uniform_pm1(rng);
    CHECK(euclid_dot({s * a.q + b.q}, b) ==
          doctest::Approx(s * euclid_dot(a, b) + euclid_dot(b, b)));
  }
}

TEST_CASE("flat and sharp are the componentwise identification") {
  CHECK(flat(SpaceVector{Vec3(1, 2, 3)}).k == Vec3(1, 2, 3));
  const SpaceVector q{Vec3(-4, 0, 7)};
  CHECK(sharp(flat(q)).q == q.q);
  CHECK(flat(SpaceVector{Vec3(2, 0, 0)})(SpaceVector{Vec3(3, 0, 0)}) == 6.0);
  const SpaceCovector k{Vec3(0.5, -1.0, 2.0)};
  CHECK(flat(sharp(k)).k == k.k);
  // flat(q)(p) is the inner product.
  CHECK(flat(q)(SpaceVector{Vec3(1, 1, 1)}) == doctest::Approx(euclid_dot(q, {Vec3(1, 1, 1)})));
}

TEST_CASE("covector restriction drops the time component") {
  const FourCovector K{5.0, Vec3(1, 2, 3)};
  CHECK(restrict_covector(K).k == Vec3(1, 2, 3));
  CHECK(restrict_covector(FourCovector{}).k == Vec3::Zero());
  const FourCovector K2{1.0, Vec3(1, 1, 1)};
  const SpaceVector q{Vec3(2, 0, 0)};
  CHECK(restrict_covector(K2)(q) == doctest::Approx(K2(embed(q))));
}

TEST_CASE("antisymmetrized spacelike tensor") {
  CHECK(max_abs(antisym_space(SpaceTensor2::identity(Variance::mixed)).components()) == 0.0);

  Mat3 m = Mat3::Zero();
  m(0, 1) = 1.0;  // (x, y) entry
  const SpaceTensor2 t(Variance::mixed, m);
  const SpaceTensor2 a = antisym_space(t);
  CHECK(a(1, 0) == 1.0);
  CHECK(a(0, 1) == -1.0);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    Mat3 r;
    for (int j = 0; j < 9; ++j) r(j / 3, j % 3) = uniform_pm1(rng);
    const SpaceTensor2 s(Variance::covariant, r);
    const Mat3 anti = antisym_space(s).components();
    CHECK(max_abs(Mat3(anti + anti.transpose())) == 0.0);
    CHECK(max_abs(Mat3(anti + antisym_space(s.transposed()).components())) == 0.0);
  }
}

TEST_CASE("tensor variance rules") {
  const Tensor2 con = Tensor2::zero(Variance::contravariant);
  const Tensor2 cov = Tensor2::zero(Variance::covariant);
  const Tensor2 mix = Tensor2::identity();

  CHECK_THROWS_AS((void)(con + cov), std::invalid_argument);
  CHECK_THROWS_AS((void)(cov - mix), std::invalid_argument);
  CHECK((con + con).variance() == Variance::contravariant);
  CHECK((2.0 * cov).variance() == Variance::covariant);

  // The transpose of a mixed four-tensor would change its type and is not
  // representable; purely contra-/covariant tensors transpose fine.
  CHECK_THROWS_AS((void)mix.transposed(), std::invalid_argument);
  Mat4 m = Mat4::Zero();
  m(0, 2) = 3.0;
  CHECK(Tensor2(Variance::contravariant, m).transposed()(2, 0) == 3.0);
  CHECK(Tensor2(Variance::covariant, m).transposed()(2, 0) == 3.0);

  // Mixed tensors act on four-vectors; covariant tensors pair two of them.
  const FourVector c{1.0, Vec3(2, 0, 0)};
  const FourVector applied = mix.apply(c);
  CHECK(applied.dt == 1.0);
  CHECK(applied.dq == Vec3(2, 0, 0));
  CHECK_THROWS_AS((void)con.apply(c), std::invalid_argument);
  CHECK_THROWS_AS((void)mix.apply(c, c), std::invalid_argument);
  Mat4 g = Mat4::Identity();
  CHECK(Tensor2(Variance::covariant, g).apply(c, c) == doctest::Approx(1.0 + 4.0));

  CHECK_THROWS_AS(Tensor2(Variance::mixed, Mat4::Constant(std::nan(""))),
                  std::domain_error);
}

TEST_CASE("space tensors transpose in every variance") {
  Mat3 m = Mat3::Zero();
  m(0, 1) = 2.0;
  for (Variance v : {Variance::contravariant, Variance::covariant, Variance::mixed}) {
    const SpaceTensor2 t(v, m);
    CHECK(t.transposed()(1, 0) == 2.0);
    CHECK(t.transposed().variance() == v);
    CHECK(t.apply(Vec3(0, 1, 0)) == Vec3(2, 0, 0));
  }
}

TEST_CASE("polynomials evaluate and differentiate exactly") {
  // p = 2 t x - 3 y^2 z + 5
  Poly4 p(std::vector<Poly4::Term>{
      {2.0, {1, 1, 0, 0}}, {-3.0, {0, 0, 2, 1}}, {5.0, {0, 0, 0, 0}}});
  const WorldPoint x{2.0, Vec3(1.0, -1.0, 3.0)};
  CHECK(p(x) == doctest::Approx(2 * 2 * 1 - 3 * 1 * 3 + 5));
  CHECK(p.partial(0)(x) == doctest::Approx(2 * 1));
  CHECK(p.partial(1)(x) == doctest::Approx(2 * 2));
  CHECK(p.partial(2)(x) == doctest::Approx(-3 * 2 * (-1) * 3));
  CHECK(p.partial(3)(x) == doctest::Approx(-3 * 1));

  CHECK(Poly4::constant(4.0)(x) == 4.0);
  CHECK(Poly4::coordinate(2)(x) == -1.0);
  CHECK((p + Poly4::constant(1.0))(x) == doctest::Approx(p(x) + 1.0));
  CHECK((p * 2.0)(x) == doctest::Approx(2.0 * p(x)));

  CHECK_THROWS_AS(Poly4::coordinate(4), std::invalid_argument);
  CHECK_THROWS_AS(Poly4(std::vector<Poly4::Term>{{std::nan(""), {0, 0, 0, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("random cubic polynomials are reproducible and bounded") {
  std::mt19937_64 a(99), b(99);
  const Poly4 pa = Poly4::random_cubic(a);
  const Poly4 pb = Poly4::random_cubic(b);
  REQUIRE(pa.terms().size() == 35);
  for (std::size_t i = 0; i < pa.terms().size(); ++i) {
    CHECK(pa.terms()[i].coef == pb.terms()[i].coef);
    CHECK(pa.terms()[i].e == pb.terms()[i].e);
    CHECK(std::abs(pa.terms()[i].coef) <= 0.1);
  }
}
