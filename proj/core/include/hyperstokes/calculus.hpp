// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_CALCULUS_HPP
#define HYPERSTOKES_CALCULUS_HPP

#include "hyperstokes/field.hpp"
#include "hyperstokes/functional.hpp"

namespace hyperstokes {

// Tangential trace values on the two walls, sampled at theta_node.  Empty
// vectors mean zero trace.  Fields in the zero-boundary class never need
// this; general fields (the cutoff-corrected solution, harmonic forms) pass
// their analytic trace where a wall vorticity row matters.
struct WallTangential {
  std::vector<double> inner;
  std::vector<double> outer;
};

enum class InnerProductKind { L2, H10_energy, L4norm };

/// Pointwise metric pairing g(u,v) sampled at cell centers.
ScalarField pairing(const OneFormField& u, const OneFormField& v);

/// Euclidean divergence of the component field, at cell centers.
ScalarField divergence_euclid(const OneFormField& u);

/// d* u = -W div(u), at cell centers.
ScalarField codifferential(const OneFormField& u);

/// Integrated divergence per cell (flux balance), used by the constraint rows.
ScalarField divergence_integrated(const OneFormField& u);

// Discrete gradient of a cell scalar.  Defined as the exact mass-adjoint of
// -divergence_euclid, so that <d f, u> = <f, -div u> holds to rounding for
// fields with vanishing wall flux.  Wall r-face entries carry no information
// and are left zero.
OneFormField ext_derivative(const ScalarField& f);

// Vorticity density (the du coefficient, Euclidean curl of the components)
// at vertices.  Wall rows use the supplied tangential trace (zero if absent).
VertexField vorticity(const OneFormField& u, const WallTangential* walls = nullptr);

/// || du ||^2 over the grid: sum of vertex curls against the chosen measure.
double vorticity_l2_sq(const OneFormField& u, Measure m,
                       const WallTangential* walls = nullptr);

// Exactly divergence-free field from a vertex stream potential:
//   ur = dpsi/dtheta / (r dtheta), uth = -dpsi/dr slotwise.
// The per-cell flux balance telescopes to rounding level.
OneFormField stream_to_oneform(const VertexField& psi);

/// Covariant derivative in chart components, at cell centers.
TensorField covariant_derivative(const OneFormField& u);

/// Symmetric part of the covariant derivative.
TensorField deformation(const OneFormField& u);

// Adjoint of covariant_derivative: given center weights tau on the four
// tensor slots, returns the dual face vector with
// <covariant_derivative(u), tau> = <u, covariant_adjoint(tau)>.
WeakFunctional covariant_adjoint(const TensorField& tau);

// Cartesian components interpolated to cell centers (first, second).
void center_components(const OneFormField& u, ScalarField& u1, ScalarField& u2);

/// Adjoint of center_components as a dual face vector.
WeakFunctional center_adjoint(const ScalarField& w1, const ScalarField& w2);

// --- inner products and norms ------------------------------------------

/// L2(H^2) inner product of 1-forms; equals the Euclidean face inner product.
double l2_inner(const OneFormField& u, const OneFormField& v);

// The energy inner product ((u,v)) = int g(du,dv) Vol + 2a^2 int g(u,v) Vol.
double energy_inner(const OneFormField& u, const OneFormField& v,
                    const WallTangential* walls_u = nullptr,
                    const WallTangential* walls_v = nullptr);

/// Strict form of the energy product; throws unless both fields are tagged
/// zero on both walls.
double h10_inner(const OneFormField& u, const OneFormField& v);

/// || grad u ||^2_{L2(H^2)} through the covariant derivative.
double h1_grad_sq(const OneFormField& u);

/// 2 int g(Def u, Def u) Vol; the deformation energy.
double deformation_energy(const OneFormField& u);

struct FieldNorms {
  double l2 = 0.0;
  double l4 = 0.0;
  double h1 = 0.0;  // sqrt(||grad u||^2 + ||u||^2)
};
FieldNorms norms(const OneFormField& u);

double inner(const OneFormField& u, const OneFormField& v, InnerProductKind kind);

// --- convection ----------------------------------------------------------

// Trilinear convection form b(th, v, ph) = int g(grad_th v, ph) Vol in the
// skew-symmetrized realization 0.5 [ B(th,v,ph) - B(th,ph,v) ], which makes
// b(th, v, v) vanish identically in floating arithmetic.
double trilinear(const OneFormField& th, const OneFormField& v,
                 const OneFormField& ph);

/// Plain one-sided quadrature B(th, v, ph); the skew form averages two of these.
double trilinear_raw(const OneFormField& th, const OneFormField& v,
                     const OneFormField& ph);

/// Dual vector of phi -> coeff * b(th, v, phi), accumulated into out.
void add_trilinear_dual(const OneFormField& th, const OneFormField& v,
                        double coeff, WeakFunctional& out);

// --- operator applications (dual form) -----------------------------------

// One code path for the three quadratic forms the solvers use:
//   hyperbolic energy  (conformal curl, no div, mass 2a^2)     -> ((u, .))
//   euclidean H1       (flat curl, flat div, mass 0)           -> grad-energy
//   bochner            (conformal curl, conformal div, mass a^2)
struct OperatorKind {
  bool conformal_curl = true;
  bool include_div = false;
  bool conformal_div = false;
  double mass_coeff = 0.0;

  static OperatorKind hyperbolic_energy(double a) {
    return {true, false, false, 2.0 * a * a};
  }
  static OperatorKind euclidean_h1() { return {false, true, false, 0.0}; }
  static OperatorKind bochner(double a) { return {true, true, true, a * a}; }
};

// Dual vector K u of the quadratic form selected by kind: the action of
// phi -> (form)(u, phi) on zero-boundary phi.  walls supplies u's tangential
// trace where it is not zero.
WeakFunctional operator_apply(const OneFormField& u, const OperatorKind& kind,
                              const WallTangential* walls = nullptr);

/// u^T K u for the same form (uses zero wall traces).
double operator_energy(const OneFormField& u, const OperatorKind& kind);

/// Dual face vector of the pressure coupling, <B^T p, phi> = sum_c p_c (flux of phi)_c.
WeakFunctional pressure_gradient_dual(const ScalarField& p);

}  // namespace hyperstokes

#endif
