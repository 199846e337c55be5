// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_NAVIERSTOKES_HPP
#define HYPERSTOKES_NAVIERSTOKES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperstokes/stokes.hpp"

namespace hyperstokes {

// Empirical constants of the small-data theory.  Every entry is invariant
// under rescaling of the harmonic amplitude: the quadratic part of the
// forcing is tracked separately so the derived smallness threshold depends
// only on (a, R0, profile, grid).
struct ConstantsReport {
  double C_poincare = 0.0;      // sup a ||phi||_2 / ||grad phi||_2
  double C_ladyzhenskaya = 0.0; // sup ||phi||_4 / (||phi||_2^1/2 (...)^1/2)
  double C_harmonic = 0.0;      // sup_n ||grad dF|| / ||dF|| over modes 1..4
  double C_l4_grad = 0.0;       // sup ||phi||_4 / ||grad phi||_2
  double c_grad_psi = 0.0;      // ||grad Psi|| / ||dF||
  double c_psi_l4 = 0.0;        // ||Psi||_4 / ||dF||
  double c_psi_l2 = 0.0;        // ||Psi||_2 / ||dF||
  double c_w_l4 = 0.0;          // ||w||_4 / ||dF||
  double c_grad_w = 0.0;        // ||grad w|| / ||dF||
  double c_phi_lin = 0.0;       // || linear part of Phi ||_dual / ||dF||
  double c_phi_quad = 0.0;      // || convective part of Phi ||_dual / ||dF||^2
  double c_ninety = 0.0;        // sup |b(phi, Psi, phi)| / (||grad phi||^2 ||dF||)
  double C_aR0 = 0.0;           // 2 x max of the above chain constants
  double dF_threshold = 0.0;    // 1 / (2 C_aR0)
  std::uint64_t seed = 0;
  int samples = 0;
};

struct SolverOptions {
  std::vector<double> lambda_schedule{0.25, 0.5, 0.75, 1.0};
  double picard_tol = 1e-10;
  int picard_max_iters = 200;
  double damping = 0.0;  // 0 = undamped
  bool allow_large_data = false;

  void validate() const;
};

struct PicardStageTrace {
  double lambda = 0.0;
  std::vector<double> increments;  // energy norm of successive updates
  int iterations = 0;
};

struct NsTrace {
  std::vector<PicardStageTrace> stages;
  int total_iterations = 0;
  bool converged = false;
  double final_increment = 0.0;
  double contraction_ratio = 0.0;  // max ratio of successive increments at lambda = 1
};

// Psi = (eta - 1) dF + w and the weak forcing Phi = Lap Psi - 2a^2 Psi -
// grad_Psi Psi.  d* Psi vanishes at solver tolerance by construction.
struct PsiPhi {
  OneFormField Psi;
  WallTangential psi_walls;      // tangential trace of Psi (outer wall = -dF)
  WeakFunctional Phi;
  WeakFunctional Phi_linear;     // Lap Psi - 2a^2 Psi part
  WeakFunctional Phi_convective; // -grad_Psi Psi part
  double div_residual_rel = 0.0; // ||d* Psi|| / ||Psi||_H1
};

PsiPhi assemble_psi_phi(const CutoffField& eta, const HarmonicField& F,
                        const OneFormField& w, const AnnulusGrid& grid);

ConstantsReport estimate_constants(const AnnulusGrid& grid, const CutoffField& eta,
                                   const OneFormField& w_unit,
                                   const PsiPhi& psi_unit, double dF_l2_unit,
                                   int samples, std::uint64_t seed);

struct NsSolveResult {
  OneFormField w_R;
  ScalarField P;
  NsTrace trace;
  double energy_identity_residual = 0.0;     // relative
  double cancellation_psi = 0.0;             // b(Psi, w, w)
  double cancellation_self = 0.0;            // b(w, w, w)
  double apriori_lhs = 0.0, apriori_rhs = 0.0;
  bool apriori_satisfied = false;
  double momentum_residual_rel = 0.0;
};

// Picard iteration with lambda continuation for the convected problem
//   ((w, phi)) = lambda [ <Phi, phi> - b(w,Psi,phi) - b(Psi,w,phi) - b(w,w,phi) ].
// Requires ||dF|| below the smallness threshold unless opts.allow_large_data.
NsSolveResult solve_ns_annulus(const SpectralSaddleSolver& solver, const PsiPhi& pp,
                               double dF_l2, double dF_threshold,
                               const SolverOptions& opts);

/// | ((w,w)) - <Phi,w> + b(w,Psi,w) | / ((w,w)); the two cancellation terms
/// are reported separately by the solver.
double check_energy_identity(const OneFormField& w_R, const PsiPhi& pp);

struct AprioriCheck {
  double lhs = 0.0, rhs = 0.0;
  bool satisfied = false;
};
AprioriCheck check_apriori_bound(const OneFormField& w_R, double dF_l2, double C_aR0);

// --- domain exhaustion ---------------------------------------------------------

struct ExhaustionSchedule {
  std::vector<double> R_m;  // strictly increasing geodesic radii, all > 5 R0
  int n_r_first = 96;       // radial cells of the first stage
  int n_th = 192;

  void validate(const DomainSpec& spec) const;
};

struct ExhaustionStage {
  double R = 0.0;
  int n_r = 0;
  double h1_norm = 0.0;
  double energy_identity_residual = 0.0;
  bool apriori_satisfied = false;
};

struct ExhaustionResult {
  std::vector<ExhaustionStage> stages;
  std::vector<double> cauchy_deltas;     // H1 norm of stage differences on the common annulus
  std::vector<double> pressure_overlap_gaps;
  double pressure_max_gap = 0.0;
};

// Solves the convected problem on nested truncations that share radial nodes
// on the common annulus, reports the Cauchy differences restricted to the
// innermost annulus, and glues locally recovered pressures of the final
// stage.
ExhaustionResult exhaust_domains(const DomainSpec& spec, const HarmonicSpec& hs,
                                 const ExhaustionSchedule& schedule,
                                 const SolverOptions& opts,
                                 CutoffProfile profile = CutoffProfile::smooth_exponential);

}  // namespace hyperstokes

#endif
