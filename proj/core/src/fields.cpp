#include "stkin/fields.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace stkin {

namespace {

std::string at_str(const WorldPoint& x) {
  std::ostringstream os;
  os << "(t=" << x.t << ", q=[" << x.q.x() << ", " << x.q.y() << ", " << x.q.z() << "])";
  return os.str();
}

void require_finite_scalar(double v, const WorldPoint& x, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + ": non-finite evaluation near " + at_str(x));
  }
}

template <typename Derived>
void require_finite_mat(const Eigen::MatrixBase<Derived>& m, const WorldPoint& x,
                        const char* what) {
  if (!m.allFinite()) {
    throw std::domain_error(std::string(what) + ": non-finite evaluation near " + at_str(x));
  }
}

}  // namespace

namespace detail {
double checked_eval(const std::function<double(const WorldPoint&)>& f, const WorldPoint& x) {
  double v = f(x);
  require_finite_scalar(v, x, "ScalarField");
  return v;
}
}  // namespace detail

// --- ScalarField -----------------------------------------------------------

ScalarField ScalarField::constant(double value) {
  return ScalarField([value](const WorldPoint&) { return value; },
                     [](const WorldPoint&) { return FourCovector{}; });
}

ScalarField ScalarField::from_poly(const Poly4& p) {
  auto data = std::make_shared<std::array<Poly4, 5>>();
  (*data)[0] = p;
  for (int axis = 0; axis < 4; ++axis) (*data)[1 + axis] = p.partial(axis);
  return ScalarField(
      [data](const WorldPoint& x) { return (*data)[0](x); },
      [data](const WorldPoint& x) {
        return FourCovector{(*data)[1](x), Vec3((*data)[2](x), (*data)[3](x), (*data)[4](x))};
      });
}

double ScalarField::operator()(const WorldPoint& x) const {
  return detail::checked_eval(eval_, x);
}

FourCovector ScalarField::derivative(const WorldPoint& x, const FdConfig& fd) const {
  if (grad_) {
    FourCovector g = grad_(x);
    require_finite_mat(g.vec4(), x, "ScalarField::derivative");
    return g;
  }
  auto f = [this](const WorldPoint& y) { return detail::checked_eval(eval_, y); };
  FourCovector g;
  g.k0 = fd::central(f, x, 0, fd.h);
  for (int j = 0; j < 3; ++j) g.k[j] = fd::central(f, x, 1 + j, fd.h);
  return g;
}

SpaceCovector ScalarField::spacelike_derivative(const WorldPoint& x, const FdConfig& fd) const {
  return restrict_covector(derivative(x, fd));
}

// --- VectorField ------------------------------------------------------------

VectorField VectorField::constant(const FourVector& value) {
  return VectorField([value](const WorldPoint&) { return value; },
                     [](const WorldPoint&) { return Mat4::Zero().eval(); },
                     /*spacelike=*/value.dt == 0.0);
}

VectorField VectorField::constant_space(const Vec3& value) {
  return constant(FourVector{0.0, value});
}

namespace {

struct PolyVec4 {
  std::array<Poly4, 4> comp;
  std::array<std::array<Poly4, 4>, 4> partial;  // [component][axis]
};

std::shared_ptr<const PolyVec4> make_poly_vec4(const std::array<Poly4, 4>& comp) {
  auto data = std::make_shared<PolyVec4>();
  data->comp = comp;
  for (int i = 0; i < 4; ++i)
    for (int axis = 0; axis < 4; ++axis) data->partial[i][axis] = comp[i].partial(axis);
  return data;
}

Mat4 eval_poly_jacobian(const PolyVec4& data, const WorldPoint& x) {
  Mat4 j;
  for (int i = 0; i < 4; ++i)
    for (int axis = 0; axis < 4; ++axis) j(i, axis) = data.partial[i][axis](x);
  return j;
}

}  // namespace

VectorField VectorField::from_polys(const std::array<Poly4, 4>& comp) {
  auto data = make_poly_vec4(comp);
  bool spacelike = comp[0].empty();
  return VectorField(
      [data](const WorldPoint& x) {
        return FourVector{data->comp[0](x),
                          Vec3(data->comp[1](x), data->comp[2](x), data->comp[3](x))};
      },
      [data](const WorldPoint& x) { return eval_poly_jacobian(*data, x); }, spacelike);
}

VectorField VectorField::space_from_polys(const std::array<Poly4, 3>& comp) {
  return from_polys({Poly4(), comp[0], comp[1], comp[2]});
}

FourVector VectorField::operator()(const WorldPoint& x) const {
  FourVector v = eval_(x);
  require_finite_mat(v.vec4(), x, "VectorField");
  return v;
}

Mat4 VectorField::derivative_components(const WorldPoint& x, const FdConfig& fd) const {
  if (jac_) {
    Mat4 j = jac_(x);
    require_finite_mat(j, x, "VectorField::derivative");
    return j;
  }
  auto f = [this](const WorldPoint& y) { return (*this)(y).vec4().eval(); };
  Mat4 j;
  for (int axis = 0; axis < 4; ++axis) j.col(axis) = fd::central(f, x, axis, fd.h);
  return j;
}

Tensor2 VectorField::derivative(const WorldPoint& x, const FdConfig& fd) const {
  return Tensor2(Variance::mixed, derivative_components(x, fd));
}

SpaceTensor2 VectorField::spacelike_derivative(const WorldPoint& x, const FdConfig& fd) const {
  if (!spacelike_) {
    throw std::invalid_argument(
        "VectorField::spacelike_derivative: field is not spacelike");
  }
  return SpaceTensor2(Variance::mixed,
                      derivative_components(x, fd).block<3, 3>(1, 1));
}

// --- CovectorField ----------------------------------------------------------

CovectorField CovectorField::constant(const FourCovector& value) {
  return CovectorField([value](const WorldPoint&) { return value; },
                       [](const WorldPoint&) { return Mat4::Zero().eval(); },
                       /*spacelike=*/value.k0 == 0.0);
}

CovectorField CovectorField::constant_space(const Vec3& value) {
  return constant(FourCovector{0.0, value});
}

CovectorField CovectorField::from_polys(const std::array<Poly4, 4>& comp) {
  auto data = make_poly_vec4(comp);
  bool spacelike = comp[0].empty();
  return CovectorField(
      [data](const WorldPoint& x) {
        return FourCovector{data->comp[0](x),
                            Vec3(data->comp[1](x), data->comp[2](x), data->comp[3](x))};
      },
      [data](const WorldPoint& x) { return eval_poly_jacobian(*data, x); }, spacelike);
}

CovectorField CovectorField::space_from_polys(const std::array<Poly4, 3>& comp) {
  return from_polys({Poly4(), comp[0], comp[1], comp[2]});
}

FourCovector CovectorField::operator()(const WorldPoint& x) const {
  FourCovector v = eval_(x);
  require_finite_mat(v.vec4(), x, "CovectorField");
  return v;
}

Mat4 CovectorField::derivative_components(const WorldPoint& x, const FdConfig& fd) const {
  if (jac_) {
    Mat4 j = jac_(x);
    require_finite_mat(j, x, "CovectorField::derivative");
    return j;
  }
  auto f = [this](const WorldPoint& y) { return (*this)(y).vec4().eval(); };
  Mat4 j;
  for (int axis = 0; axis < 4; ++axis) j.col(axis) = fd::central(f, x, axis, fd.h);
  return j;
}

Tensor2 CovectorField::derivative(const WorldPoint& x, const FdConfig& fd) const {
  return Tensor2(Variance::covariant, derivative_components(x, fd));
}

SpaceTensor2 CovectorField::spacelike_derivative(const WorldPoint& x, const FdConfig& fd) const {
  if (!spacelike_) {
    throw std::invalid_argument(
        "CovectorField::spacelike_derivative: field is not spacelike");
  }
  return SpaceTensor2(Variance::covariant,
                      derivative_components(x, fd).block<3, 3>(1, 1));
}

// --- Tensor2Field -----------------------------------------------------------

Tensor2Field Tensor2Field::constant(const Tensor2& value) {
  Mat4 m = value.components();
  bool spacelike = m.row(0).isZero(0.0) && m.col(0).isZero(0.0);
  return Tensor2Field(
      value.variance(), [m](const WorldPoint&) { return m; },
      [](const WorldPoint&) {
        return std::array<Mat4, 4>{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
      },
      spacelike);
}

Tensor2Field Tensor2Field::constant_space(Variance variance, const Mat3& value) {
  Mat4 m = Mat4::Zero();
  m.block<3, 3>(1, 1) = value;
  return constant(Tensor2(variance, m));
}

Tensor2Field Tensor2Field::from_polys(Variance variance, const std::array<Poly4, 16>& comp) {
  struct Data {
    std::array<Poly4, 16> comp;
    std::array<std::array<Poly4, 16>, 4> partial;  // [axis][entry]
  };
  auto data = std::make_shared<Data>();
  data->comp = comp;
  for (int axis = 0; axis < 4; ++axis)
    for (int e = 0; e < 16; ++e) data->partial[axis][e] = comp[e].partial(axis);

  bool spacelike = true;
  for (int i = 0; i < 4 && spacelike; ++i) {
    spacelike = comp[4 * 0 + i].empty() && comp[4 * i + 0].empty();
  }
  return Tensor2Field(
      variance,
      [data](const WorldPoint& x) {
        Mat4 m;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) m(i, j) = data->comp[4 * i + j](x);
        return m;
      },
      [data](const WorldPoint& x) {
        std::array<Mat4, 4> p;
        for (int axis = 0; axis < 4; ++axis)
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) p[axis](i, j) = data->partial[axis][4 * i + j](x);
        return p;
      },
      spacelike);
}

Tensor2Field Tensor2Field::space_from_polys(Variance variance, const std::array<Poly4, 9>& comp) {
  std::array<Poly4, 16> full;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) full[4 * (i + 1) + (j + 1)] = comp[3 * i + j];
  return from_polys(variance, full);
}

Tensor2 Tensor2Field::operator()(const WorldPoint& x) const {
  return Tensor2(variance_, components(x));
}

Mat4 Tensor2Field::components(const WorldPoint& x) const {
  Mat4 m = eval_(x);
  require_finite_mat(m, x, "Tensor2Field");
  return m;
}

Mat3 Tensor2Field::space_components(const WorldPoint& x) const {
  return components(x).block<3, 3>(1, 1);
}

std::array<Mat4, 4> Tensor2Field::partials(const WorldPoint& x, const FdConfig& fd) const {
  if (partials_) {
    std::array<Mat4, 4> p = partials_(x);
    for (const Mat4& m : p) require_finite_mat(m, x, "Tensor2Field::partials");
    return p;
  }
  auto f = [this](const WorldPoint& y) { return components(y); };
  std::array<Mat4, 4> p;
  for (int axis = 0; axis < 4; ++axis) p[axis] = fd::central(f, x, axis, fd.h);
  return p;
}

Mat4 Tensor2Field::directional_derivative(const WorldPoint& x, const FourVector& w,
                                          const FdConfig& fd) const {
  std::array<Mat4, 4> p = partials(x, fd);
  return w.dt * p[0] + w.dq.x() * p[1] + w.dq.y() * p[2] + w.dq.z() * p[3];
}

// --- VelocityField ----------------------------------------------------------

Vec3 VelocityField::operator()(double t, const Vec3& q) const {
  Vec3 v = v_(t, q);
  require_finite_mat(v, WorldPoint{t, q}, "VelocityField");
  return v;
}

Vec3 VelocityField::partial_t(double t, const Vec3& q, const FdConfig& fd) const {
  if (dv_dt_) {
    Vec3 v = dv_dt_(t, q);
    require_finite_mat(v, WorldPoint{t, q}, "VelocityField::partial_t");
    return v;
  }
  const double d = fd::step_for(fd.h, t);
  return ((*this)(t + d, q) - (*this)(t - d, q)) / (2.0 * d);
}

Mat3 VelocityField::gradient(double t, const Vec3& q, const FdConfig& fd) const {
  if (grad_) {
    Mat3 g = grad_(t, q);
    require_finite_mat(g, WorldPoint{t, q}, "VelocityField::gradient");
    return g;
  }
  Mat3 g;
  for (int j = 0; j < 3; ++j) {
    const double d = fd::step_for(fd.h, q[j]);
    Vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    g.col(j) = ((*this)(t, qp) - (*this)(t, qm)) / (2.0 * d);
  }
  return g;
}

Mat4 VelocityField::derivative4(const WorldPoint& x, const FdConfig& fd) const {
  Mat4 g = Mat4::Zero();
  g.block<3, 1>(1, 0) = partial_t(x.t, x.q, fd);
  g.block<3, 3>(1, 1) = gradient(x.t, x.q, fd);
  return g;
}

VectorField VelocityField::as_vector_field() const {
  VelocityField u = *this;
  return VectorField(
      [u](const WorldPoint& x) { return u.at(x); },
      [u](const WorldPoint& x) { return u.derivative4(x); },
      /*spacelike=*/false);
}

Mat3 wedge_gradient(const VelocityField& u, const WorldPoint& x, const FdConfig& fd) {
  Mat3 g = u.gradient(x.t, x.q, fd);
  return g.transpose() - g;
}

Mat3 vorticity_operator(const VelocityField& u, const WorldPoint& x, const FdConfig& fd) {
  return -0.5 * wedge_gradient(u, x, fd);
}

// --- catalog ----------------------------------------------------------------

namespace {

class ParamReader {
 public:
  ParamReader(const std::string& field, const std::map<std::string, double>& params)
      : field_(field), params_(params) {}

  double get(const std::string& key, double fallback) {
    seen_.push_back(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (!std::isfinite(it->second)) {
      throw std::invalid_argument("catalog_field " + field_ + ": parameter '" + key +
                                  "' is not finite");
    }
    return it->second;
  }

  /// Every supplied key must have been consumed by get().
  void finish() const {
    for (const auto& [key, value] : params_) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw std::invalid_argument("catalog_field " + field_ + ": unknown parameter '" +
                                    key + "'");
      }
    }
  }

 private:
  std::string field_;
  const std::map<std::string, double>& params_;
  std::vector<std::string> seen_;
};

}  // namespace

VelocityField catalog_field(const std::string& name,
                            const std::map<std::string, double>& params) {
  ParamReader p(name, params);
  if (name == "constant") {
    Vec3 w(p.get("wx", 0.0), p.get("wy", 0.0), p.get("wz", 0.0));
    p.finish();
    return VelocityField([w](double, const Vec3&) { return w; },
                         [](double, const Vec3&) { return Vec3::Zero().eval(); },
                         [](double, const Vec3&) { return Mat3::Zero().eval(); });
  }
  if (name == "rigid_rotation") {
    const double omega0 = p.get("omega0", 1.0);
    p.finish();
    const Mat3 w = omega0 * hat(Vec3::UnitZ());
    return VelocityField([w](double, const Vec3& q) { return (w * q).eval(); },
                         [](double, const Vec3&) { return Vec3::Zero().eval(); },
                         [w](double, const Vec3&) { return w; });
  }
  if (name == "simple_shear") {
    const double kappa = p.get("kappa", 1.0);
    p.finish();
    Mat3 g = Mat3::Zero();
    g(0, 1) = kappa;
    return VelocityField(
        [kappa](double, const Vec3& q) { return Vec3(kappa * q.y(), 0.0, 0.0); },
        [](double, const Vec3&) { return Vec3::Zero().eval(); },
        [g](double, const Vec3&) { return g; });
  }
  if (name == "time_ramped_shear") {
    const double a = p.get("a", 1.0);
    p.finish();
    return VelocityField([a](double t, const Vec3&) { return Vec3(a * t, 0.0, 0.0); },
                         [a](double, const Vec3&) { return Vec3(a, 0.0, 0.0); },
                         [](double, const Vec3&) { return Mat3::Zero().eval(); });
  }
  if (name == "planar_vortex") {
    const double omega0 = p.get("omega0", 1.0);
    const double ell = p.get("ell", 1.0);
    p.finish();
    if (ell == 0.0) {
      throw std::invalid_argument("catalog_field planar_vortex: ell must be nonzero");
    }
    const Mat3 w = hat(Vec3::UnitZ());
    const double inv_l2 = 1.0 / (ell * ell);
    return VelocityField(
        [omega0, w, inv_l2](double, const Vec3& q) {
          return (omega0 * std::exp(-q.squaredNorm() * inv_l2) * (w * q)).eval();
        },
        [](double, const Vec3&) { return Vec3::Zero().eval(); },
        [omega0, w, inv_l2](double, const Vec3& q) {
          const double f = omega0 * std::exp(-q.squaredNorm() * inv_l2);
          return (f * (w - 2.0 * inv_l2 * (w * q) * q.transpose())).eval();
        });
  }
  if (name == "uniform_expansion") {
    const double alpha = p.get("alpha", 1.0);
    p.finish();
    return VelocityField([alpha](double, const Vec3& q) { return (alpha * q).eval(); },
                         [](double, const Vec3&) { return Vec3::Zero().eval(); },
                         [alpha](double, const Vec3&) { return (alpha * Mat3::Identity()).eval(); });
  }
  throw std::invalid_argument("catalog_field: unknown field '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"constant",      "rigid_rotation",    "simple_shear",
          "time_ramped_shear", "planar_vortex", "uniform_expansion"};
}

// --- flow -------------------------------------------------------------------

namespace {

void validate_flow_args(double s, double step) {
  if (!std::isfinite(s)) throw std::invalid_argument("flow: s must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("flow: step must be positive and finite");
  }
}

}  // namespace

FlowResult flow(const VelocityField& u, const WorldPoint& x, double s, double step) {
  validate_flow_args(s, step);
  FlowResult out;
  out.s = s;
  out.point = x;
  out.jacobian = Mat4::Identity();
  if (s == 0.0) return out;

  const int n = static_cast<int>(std::ceil(std::abs(s) / step));
  const double h = s / n;
  Vec3 q = x.q;
  Mat4 jac = Mat4::Identity();
  for (int k = 0; k < n; ++k) {
    const double t = x.t + k * h;
    // Joint RK4 step for the position and the variational equation.
    const Vec3 k1 = u(t, q);
    const Mat4 g1 = u.derivative4({t, q});
    const Vec3 q2 = q + 0.5 * h * k1;
    const Vec3 k2 = u(t + 0.5 * h, q2);
    const Mat4 g2 = u.derivative4({t + 0.5 * h, q2});
    const Vec3 q3 = q + 0.5 * h * k2;
    const Vec3 k3 = u(t + 0.5 * h, q3);
    const Mat4 g3 = u.derivative4({t + 0.5 * h, q3});
    const Vec3 q4 = q + h * k3;
    const Vec3 k4 = u(t + h, q4);
    const Mat4 g4 = u.derivative4({t + h, q4});

    const Mat4 j1 = g1 * jac;
    const Mat4 j2 = g2 * (jac + 0.5 * h * j1);
    const Mat4 j3 = g3 * (jac + 0.5 * h * j2);
    const Mat4 j4 = g4 * (jac + h * j3);

    q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    jac += (h / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
    if (!q.allFinite() || !jac.allFinite()) {
      throw std::domain_error("flow: integration diverged near " + at_str({t, q}));
    }
  }
  // Time advances uniformly, so it is set exactly rather than accumulated.
  out.point = WorldPoint{x.t + s, q};
  out.jacobian = jac;
  return out;
}

WorldPoint flow_point(const VelocityField& u, const WorldPoint& x, double s, double step) {
  validate_flow_args(s, step);
  if (s == 0.0) return x;
  const int n = static_cast<int>(std::ceil(std::abs(s) / step));
  const double h = s / n;
  Vec3 q = x.q;
  for (int k = 0; k < n; ++k) {
    const double t = x.t + k * h;
    const Vec3 k1 = u(t, q);
    const Vec3 k2 = u(t + 0.5 * h, q + 0.5 * h * k1);
    const Vec3 k3 = u(t + 0.5 * h, q + 0.5 * h * k2);
    const Vec3 k4 = u(t + h, q + h * k3);
    q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!q.allFinite()) {
      throw std::domain_error("flow_point: integration diverged near " + at_str({t, q}));
    }
  }
  return WorldPoint{x.t + s, q};
}

}  // namespace stkin
