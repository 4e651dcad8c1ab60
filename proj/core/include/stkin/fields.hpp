#pragma once

// Smooth fields on space-time: scalars, (four-)vectors, covectors, second
// order tensors, and the continuum velocity field with its flow map.
//
// Every field is an immutable closure plus, optionally, analytic partial
// derivatives. When no analytic derivative is supplied, derivative queries
// fall back to central finite differences (see fd.hpp). Derivative component
// conventions, everywhere in the library: the row (first) index is the value
// slot, the column (second) index is the differentiation axis, both in chart
// order (t, x, y, z).

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stkin/fd.hpp"
#include "stkin/poly.hpp"
#include "stkin/spacetime.hpp"

namespace stkin {

namespace detail {
double checked_eval(const std::function<double(const WorldPoint&)>& f, const WorldPoint& x);
}

/// Real-valued field on space-time.
class ScalarField {
 public:
  using Eval = std::function<double(const WorldPoint&)>;
  using Gradient = std::function<FourCovector(const WorldPoint&)>;

  explicit ScalarField(Eval eval) : eval_(std::move(eval)) {}
  ScalarField(Eval eval, Gradient grad) : eval_(std::move(eval)), grad_(std::move(grad)) {}

  static ScalarField constant(double value);
  static ScalarField from_poly(const Poly4& p);

  double operator()(const WorldPoint& x) const;

  bool has_analytic_derivative() const { return static_cast<bool>(grad_); }

  /// Df(x) as a four-covector (∂_t f, ∂_x f, ∂_y f, ∂_z f).
  FourCovector derivative(const WorldPoint& x, const FdConfig& fd = {}) const;
  /// Restriction of Df(x) to the spacelike subspace.
  SpaceCovector spacelike_derivative(const WorldPoint& x, const FdConfig& fd = {}) const;

 private:
  Eval eval_;
  Gradient grad_;
};

/// Four-vector valued field. A spacelike field has time span zero
/// everywhere; the flag is declared at construction and lets derivative
/// code dispatch without sampling.
class VectorField {
 public:
  using Eval = std::function<FourVector(const WorldPoint&)>;
  /// (i, j) entry = ∂_j C^i.
  using Jacobian = std::function<Mat4(const WorldPoint&)>;

  VectorField(Eval eval, bool spacelike)
      : eval_(std::move(eval)), spacelike_(spacelike) {}
  VectorField(Eval eval, Jacobian jac, bool spacelike)
      : eval_(std::move(eval)), jac_(std::move(jac)), spacelike_(spacelike) {}

  static VectorField constant(const FourVector& value);
  static VectorField constant_space(const Vec3& value);
  static VectorField from_polys(const std::array<Poly4, 4>& comp);
  static VectorField space_from_polys(const std::array<Poly4, 3>& comp);

  FourVector operator()(const WorldPoint& x) const;

  bool spacelike() const { return spacelike_; }
  bool has_analytic_derivative() const { return static_cast<bool>(jac_); }

  /// DC(x), a mixed M (x) M* tensor.
  Tensor2 derivative(const WorldPoint& x, const FdConfig& fd = {}) const;
  Mat4 derivative_components(const WorldPoint& x, const FdConfig& fd = {}) const;
  /// ∇c for spacelike fields: entries ∂_j c^i, i, j spatial. Rejects
  /// non-spacelike fields, whose spacelike derivative has a time row.
  SpaceTensor2 spacelike_derivative(const WorldPoint& x, const FdConfig& fd = {}) const;

 private:
  Eval eval_;
  Jacobian jac_;
  bool spacelike_ = false;
};

/// Four-covector valued field; spacelike means the time component vanishes
/// identically.
class CovectorField {
 public:
  using Eval = std::function<FourCovector(const WorldPoint&)>;
  /// (i, j) entry = ∂_j K_i.
  using Jacobian = std::function<Mat4(const WorldPoint&)>;

  CovectorField(Eval eval, bool spacelike)
      : eval_(std::move(eval)), spacelike_(spacelike) {}
  CovectorField(Eval eval, Jacobian jac, bool spacelike)
      : eval_(std::move(eval)), jac_(std::move(jac)), spacelike_(spacelike) {}

  static CovectorField constant(const FourCovector& value);
  static CovectorField constant_space(const Vec3& value);
  static CovectorField from_polys(const std::array<Poly4, 4>& comp);
  static CovectorField space_from_polys(const std::array<Poly4, 3>& comp);

  FourCovector operator()(const WorldPoint& x) const;

  bool spacelike() const { return spacelike_; }
  bool has_analytic_derivative() const { return static_cast<bool>(jac_); }

  /// DK(x), a covariant tensor with entries (DK)_{ij} = ∂_j K_i.
  Tensor2 derivative(const WorldPoint& x, const FdConfig& fd = {}) const;
  Mat4 derivative_components(const WorldPoint& x, const FdConfig& fd = {}) const;
  /// ∇k for spacelike fields: entries ∂_j k_i, i, j spatial.
  SpaceTensor2 spacelike_derivative(const WorldPoint& x, const FdConfig& fd = {}) const;

 private:
  Eval eval_;
  Jacobian jac_;
  bool spacelike_ = false;
};

/// Second-order tensor field of a fixed variance. Spacelike means the time
/// row and column vanish identically (the tensor lives over E in the slots
/// that admit it).
class Tensor2Field {
 public:
  using Eval = std::function<Mat4(const WorldPoint&)>;
  /// Partial derivatives ∂_α T for α = t, x, y, z.
  using Partials = std::function<std::array<Mat4, 4>(const WorldPoint&)>;

  Tensor2Field(Variance variance, Eval eval, bool spacelike = false)
      : variance_(variance), eval_(std::move(eval)), spacelike_(spacelike) {}
  Tensor2Field(Variance variance, Eval eval, Partials partials, bool spacelike = false)
      : variance_(variance),
        eval_(std::move(eval)),
        partials_(std::move(partials)),
        spacelike_(spacelike) {}

  static Tensor2Field constant(const Tensor2& value);
  static Tensor2Field constant_space(Variance variance, const Mat3& value);
  /// Components in row-major chart order: comp[4*i + j] is entry (i, j).
  static Tensor2Field from_polys(Variance variance, const std::array<Poly4, 16>& comp);
  /// Spacelike tensor from its 3x3 space block, comp[3*i + j].
  static Tensor2Field space_from_polys(Variance variance, const std::array<Poly4, 9>& comp);

  Tensor2 operator()(const WorldPoint& x) const;
  Mat4 components(const WorldPoint& x) const;
  Mat3 space_components(const WorldPoint& x) const;

  Variance variance() const { return variance_; }
  bool spacelike() const { return spacelike_; }
  bool has_analytic_derivative() const { return static_cast<bool>(partials_); }

  std::array<Mat4, 4> partials(const WorldPoint& x, const FdConfig& fd = {}) const;
  /// Directional derivative Σ_α w^α ∂_α T at x.
  Mat4 directional_derivative(const WorldPoint& x, const FourVector& w,
                              const FdConfig& fd = {}) const;

 private:
  Variance variance_;
  Eval eval_;
  Partials partials_;
  bool spacelike_ = false;
};

/// The continuum velocity field. As a four-vector field its value is
/// (1, v(t, q)): the time span of a world velocity is 1 by definition, so
/// only the spatial part is free.
class VelocityField {
 public:
  using Spatial = std::function<Vec3(double, const Vec3&)>;
  using SpatialJacobian = std::function<Mat3(double, const Vec3&)>;

  explicit VelocityField(Spatial v) : v_(std::move(v)) {}
  VelocityField(Spatial v, Spatial partial_t, SpatialJacobian gradient)
      : v_(std::move(v)), dv_dt_(std::move(partial_t)), grad_(std::move(gradient)) {}

  Vec3 operator()(double t, const Vec3& q) const;
  Vec3 operator()(const WorldPoint& x) const { return (*this)(x.t, x.q); }
  FourVector at(const WorldPoint& x) const { return {1.0, (*this)(x.t, x.q)}; }

  bool has_analytic_derivative() const { return static_cast<bool>(grad_); }

  Vec3 partial_t(double t, const Vec3& q, const FdConfig& fd = {}) const;
  /// Spatial velocity gradient, entries (∇u)^i_j = ∂_j v^i.
  Mat3 gradient(double t, const Vec3& q, const FdConfig& fd = {}) const;
  /// Full derivative Du(x): zero top row (the time span 1 is constant),
  /// spatial rows [∂_t v | ∇v]. Components of a mixed tensor.
  Mat4 derivative4(const WorldPoint& x, const FdConfig& fd = {}) const;

  /// View as a general four-vector field (value (1, v)).
  VectorField as_vector_field() const;

 private:
  Spatial v_;
  Spatial dv_dt_;
  SpatialJacobian grad_;
};

/// Antisymmetrized spatial gradient (∇u)* − ∇u.
Mat3 wedge_gradient(const VelocityField& u, const WorldPoint& x, const FdConfig& fd = {});
/// Local angular velocity of the continuum: −½((∇u)* − ∇u).
Mat3 vorticity_operator(const VelocityField& u, const WorldPoint& x, const FdConfig& fd = {});

/// Named analytic velocity fields with exact derivatives. Supported names
/// and parameters (all parameters optional, with the defaults shown):
///   constant            wx, wy, wz (0, 0, 0)
///   rigid_rotation      omega0 (1): v = omega0 e_z x q
///   simple_shear        kappa (1): v = kappa q_y e_x
///   time_ramped_shear   a (1): v = a t e_x
///   planar_vortex       omega0 (1), ell (1): v = omega0 e_z x q exp(-|q|^2/ell^2)
///   uniform_expansion   alpha (1): v = alpha q
/// Unknown names or parameters, or ell = 0, are rejected.
VelocityField catalog_field(const std::string& name,
                            const std::map<std::string, double>& params = {});
std::vector<std::string> catalog_names();

/// Flow map result: the transported event and the derivative DΥ_s(x) of the
/// flow with respect to the starting event (a mixed tensor; its top row is
/// exactly (1, 0, 0, 0) because time advances uniformly).
struct FlowResult {
  WorldPoint point;
  Mat4 jacobian = Mat4::Identity();
  double s = 0.0;

  Tensor2 jacobian_tensor() const { return Tensor2(Variance::mixed, jacobian); }
};

/// Integrate the flow Υ_s(x) of u together with its Jacobian (the
/// variational equation J' = Du(Υ)·J) using fixed-step classical RK4.
/// s may be negative; s = 0 returns x and the identity. The returned time
/// is set to x.t + s exactly.
FlowResult flow(const VelocityField& u, const WorldPoint& x, double s, double step = 1e-3);

/// Position-only flow (no Jacobian), same integrator.
WorldPoint flow_point(const VelocityField& u, const WorldPoint& x, double s, double step = 1e-3);

}  // namespace stkin
