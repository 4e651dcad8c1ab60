#pragma once

// Absolute material and Lie derivatives for every tensor kind, their
// observer-relative convected and Jaumann forms, and definitional
// flow-pullback oracles.
//
// The chart is inertial, so chart partial derivatives realize the coordinate
// formulas directly (no connection terms). With G = Du (zero top row,
// spatial rows [∂_t v | ∇v]) the closed forms are, componentwise:
//   material:      D_u A     = (DA)·u
//   Lie, vector:   (L_u C)^α = u^β ∂_β C^α − C^β ∂_β u^α
//   Lie, covector: (L_u K)_α = u^β ∂_β K_α + K_β ∂_α u^β
//   Lie, tensors:  D_u T − G T − T G*   (contravariant)
//                  D_u W + G* W + W G   (covariant)
//                  D_u A − G A + A G    (mixed)
// The oracles evaluate the defining limits with flow pullbacks and a central
// difference in the flow parameter, converging at O(s²).

#include <span>

#include "stkin/observers.hpp"

namespace stkin {

struct OracleConfig {
  double s_step = 1e-4;    // central-difference step in the flow parameter
  double flow_step = 1e-5; // integrator step inside the probe flows
  double fd_h = 1e-5;      // finite-difference step for the closed-form side

  /// All steps positive and finite; s_step >= 10 * flow_step so the probe
  /// integration error stays far below the difference-quotient truncation.
  void validate() const;
};

// --- material derivatives -----------------------------------------------------

double material_derivative(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                           const FdConfig& fd = {});
FourVector material_derivative(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                               const FdConfig& fd = {});
FourCovector material_derivative(const CovectorField& k, const VelocityField& u,
                                 const WorldPoint& x, const FdConfig& fd = {});
Tensor2 material_derivative(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                            const FdConfig& fd = {});

// --- finite differences of relative fields ------------------------------------

// Differentiation in observer coordinates; deliberately independent of
// every analytic-derivative path, so relative-vs-absolute comparisons test
// two genuinely different computations.
namespace relfd {
double scalar_partial_t(const RelScalarField& f, Instant t, const Vec3& q, double h = 1e-5);
Vec3 scalar_gradient(const RelScalarField& f, Instant t, const Vec3& q, double h = 1e-5);
Vec3 partial_t(const RelVectorField& f, Instant t, const Vec3& q, double h = 1e-5);
/// Entries (i, j) = ∂_j f^i.
Mat3 gradient(const RelVectorField& f, Instant t, const Vec3& q, double h = 1e-5);
Mat3 tensor_partial_t(const RelTensorField& f, Instant t, const Vec3& q, double h = 1e-5);
/// Directional spatial derivative Σ_j v^j ∂_j f.
Mat3 tensor_directional(const RelTensorField& f, Instant t, const Vec3& q, const Vec3& v,
                        double h = 1e-5);
}  // namespace relfd

/// Relative form of the material derivative of a spacelike vector field:
/// (∂₀ + ω + v_U·∇) c_U, with ω the relative angular velocity of the
/// observer. Evaluated entirely in observer coordinates.
Vec3 material_rel(const RigidObserver& obs, const RelVectorField& c_rel,
                  const RelVectorField& v_rel, Instant t, const Vec3& q, double fd_h = 1e-5);

// --- Lie derivatives -----------------------------------------------------------

double lie_derivative(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                      const FdConfig& fd = {});
FourVector lie_derivative(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                          const FdConfig& fd = {});
FourCovector lie_derivative(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                            const FdConfig& fd = {});
Tensor2 lie_derivative(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                       const FdConfig& fd = {});

// --- flow-pullback oracles ------------------------------------------------------

double lie_oracle(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                  const OracleConfig& cfg = {});
FourVector lie_oracle(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                      const OracleConfig& cfg = {});
FourCovector lie_oracle(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                        const OracleConfig& cfg = {});
Tensor2 lie_oracle(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                   const OracleConfig& cfg = {});

/// Oracles for the material derivative: central difference of the plain
/// value along the flow, no pullback.
double material_oracle(const ScalarField& f, const VelocityField& u, const WorldPoint& x,
                       const OracleConfig& cfg = {});
FourVector material_oracle(const VectorField& c, const VelocityField& u, const WorldPoint& x,
                           const OracleConfig& cfg = {});
FourCovector material_oracle(const CovectorField& k, const VelocityField& u, const WorldPoint& x,
                             const OracleConfig& cfg = {});
Tensor2 material_oracle(const Tensor2Field& t, const VelocityField& u, const WorldPoint& x,
                        const OracleConfig& cfg = {});

// --- convected and corotational forms in observer coordinates -------------------

// These relative formulas contain no observer data at all: the angular
// velocity of the frame cancels between the material and the gradient
// terms, which is exactly their frame-indifference.

/// Upper convected derivative of a spacelike vector: (∂₀ + v·∇)c − (∇v)c.
Vec3 upper_convected_rel(const RelVectorField& v, const RelVectorField& c, Instant t,
                         const Vec3& q, double fd_h = 1e-5);
/// Lower convected derivative of a spacelike covector: (∂₀ + v·∇)k + (∇v)*k.
Vec3 lower_convected_rel(const RelVectorField& v, const RelVectorField& k, Instant t,
                         const Vec3& q, double fd_h = 1e-5);
/// Jaumann derivative: (∂₀ + v·∇)c + ½((∇v)* − ∇v)c.
Vec3 jaumann_rel(const RelVectorField& v, const RelVectorField& c, Instant t, const Vec3& q,
                 double fd_h = 1e-5);
/// Space-space block forms for spacelike tensors, per variance:
/// contravariant: ṫ − (∇v)t − t(∇v)*; covariant: ṫ + (∇v)*t + t(∇v);
/// mixed: ṫ − (∇v)t + t(∇v); with ṫ = (∂₀ + v·∇)t.
Mat3 upper_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h = 1e-5);
Mat3 lower_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h = 1e-5);
Mat3 mixed_convected_tensor_rel(const RelVectorField& v, const RelTensorField& t, Instant time,
                                const Vec3& q, double fd_h = 1e-5);

/// Absolute Jaumann derivative of a spacelike vector field:
/// J_u c = D_u c + ½((∇u)* − ∇u)c. Spacelike again.
Vec3 jaumann(const VectorField& c, const VelocityField& u, const WorldPoint& x,
             const FdConfig& fd = {});

/// Corotating-observer identity: with U_o the observer corotating with u
/// along the particle through o, the partial time derivative of c's
/// relative form at the particle equals the relative form of the Jaumann
/// derivative there. Returns the max residual over the given instants.
double jaumann_corotating_residual(const VelocityField& u, const WorldPoint& o,
                                   const VectorField& c, std::span<const Instant> times,
                                   const ObserverOptions& opts = {}, double fd_h = 1e-5);

// --- deformation gradient --------------------------------------------------------

/// Deformation gradient of the flow of u between observer times t0 and
/// t0 + s, in observer coordinates: the derivative of the map
/// X ↦ split(Υ_s(unsplit(t0, X))) with respect to X.
Mat3 deformation_gradient(const VelocityField& u, const RigidObserver& obs, Instant t0,
                          const Vec3& X, double s, double flow_step = 1e-3);

/// Residual of Ḟ = (∇v_U)·F at parameter s: central difference of F in s
/// against the relative velocity gradient at the current image point.
double deformation_lie_check(const VelocityField& u, const RigidObserver& obs, Instant t0,
                             const Vec3& X, double s, double flow_step = 1e-3,
                             double ds = 1e-4);

}  // namespace stkin
