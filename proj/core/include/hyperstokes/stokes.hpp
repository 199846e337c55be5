// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_STOKES_HPP
#define HYPERSTOKES_STOKES_HPP

#include <vector>

#include "hyperstokes/divsolve.hpp"
#include "hyperstokes/ingredients.hpp"
#include "hyperstokes/spectral.hpp"

namespace hyperstokes {

struct StokesSolveReport {
  double rhs_dual_norm = 0.0;        // || T || in the discrete dual norm
  double momentum_residual = 0.0;    // dual norm of T - K w~ - B^H P
  double momentum_residual_rel = 0.0;
  double div_residual_l2 = 0.0;      // || d* w~ ||_{L2}
  double div_residual_rel = 0.0;     // relative to || w~ ||_{H1 energy}
};

struct StokesSolution {
  OneFormField u;        // (eta - 1) dF + w + w~
  OneFormField w;        // divergence corrector
  OneFormField w_tilde;  // variational part
  ScalarField P;         // multiplier, zero mean on the innermost annulus
  ScalarField p_full;    // P + 2 a^2 F, the pressure of the assembled system
  WeakFunctional T;
  DivergenceSolveReport div_report;
  StokesSolveReport stokes_report;
};

// The forcing T of the variational step, acting on zero-boundary test
// fields:  <T, phi> = -int g(d(eta dF + w), d phi) - 2a^2 int g(eta dF + w, phi).
WeakFunctional stokes_rhs(const CutoffField& eta, const HarmonicField& F,
                          const OneFormField& w, const AnnulusGrid& grid);

// Riesz-style solve on the divergence-free zero-boundary subspace via the
// saddle system; the multiplier is the pressure.  P is normalized to zero
// hyperbolic mean over the innermost annulus (up to geodesic min(6 R0, R_out)).
std::pair<OneFormField, ScalarField> solve_stokes(const SpectralSaddleSolver& solver,
                                                  const WeakFunctional& T,
                                                  StokesSolveReport* report = nullptr);

/// u = (eta - 1) dF + w + w_tilde as a face-array identity.
OneFormField assemble_solution(const CutoffField& eta, const HarmonicField& F,
                               const OneFormField& w, const OneFormField& w_tilde);

/// Tangential trace of the assembled solution (zero inner wall, -dF outer).
WallTangential solution_walls(const HarmonicField& F);

// Dual norm of rhs - K w - B^H P over the divergence-free subspace; rhs must
// already contain any convection terms evaluated at w.
double weak_residual(const SpectralSaddleSolver& solver, const WeakFunctional& rhs,
                     const OneFormField& w, const ScalarField& P);

/// Whole pipeline on one grid: cutoff, harmonic pair, divergence corrector,
/// variational solve, assembly.
StokesSolution solve_stokes_pipeline(const AnnulusGrid& grid, const HarmonicSpec& hs,
                                     CutoffProfile profile = CutoffProfile::smooth_exponential);

// --- pressure gluing ---------------------------------------------------------

struct PressureLocal {
  int i_hi = 0;   // cells [0, i_hi) of the common grid
  ScalarField P;
};

struct GlueReport {
  std::vector<double> shifts;        // constants removed per local
  std::vector<double> overlap_gaps;  // L2 gap to the glued field on each overlap
  double max_gap = 0.0;
};

// Fixes the additive constants so every local agrees with the innermost one
// on its annulus, then pastes them together.  Throws if a normalized overlap
// still disagrees above the tolerance.
std::pair<ScalarField, GlueReport> glue_pressure(std::vector<PressureLocal> locals,
                                                 double tol = 1e-8);

/// Local recovery of the multiplier on cells [0, i_hi) from a momentum dual
/// vector (least squares through the discrete gradient).
ScalarField recover_pressure_local(const AnnulusGrid& grid, int i_hi,
                                   const WeakFunctional& momentum_dual);

/// Zero the hyperbolic mean of P over cells with geodesic radius < rho_max.
void normalize_pressure(ScalarField& P, double rho_max);

double pressure_mean(const ScalarField& P, double rho_max);

}  // namespace hyperstokes

#endif
