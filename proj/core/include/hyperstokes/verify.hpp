// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_VERIFY_HPP
#define HYPERSTOKES_VERIFY_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "hyperstokes/ingredients.hpp"
#include "hyperstokes/stokes.hpp"

namespace hyperstokes {

// The headline sign identity: pairing the divergence corrector against the
// harmonic form reproduces minus the cutoff-weighted harmonic energy.
struct NontrivialityReport {
  double pairing = 0.0;      // int g(w, dF) Vol over the computational domain
  double eta_energy = 0.0;   // int eta g(dF, dF) Vol over the whole plane
  double gap = 0.0;          // | pairing + eta_energy |
  double gap_rel = 0.0;      // gap / eta_energy
  double u_h1_norm = 0.0;
  bool sign_ok = false;      // pairing < 0
};

NontrivialityReport nontriviality(const OneFormField& w, const HarmonicField& F,
                                  const CutoffField& eta, const OneFormField& u);

// If the assembled solution were zero, testing against dF would force the
// cutoff energy to be nonpositive; the certificate is that energy together
// with the near-orthogonality of the variational part against the discrete
// gradient of the potential.
struct NonzeroCertificate {
  double h1_norm = 0.0;
  double certificate = 0.0;          // int (1 - eta) g(dF, dF) Vol > 0
  double wtilde_dF_pairing = 0.0;    // int g(w~, dF) Vol, discrete-gradient route
  double wtilde_dF_rel = 0.0;        // relative to ||w~|| ||dF||
  bool nonzero = false;
};

NonzeroCertificate nonzero_solution(const OneFormField& u, const HarmonicField& F,
                                    const CutoffField& eta,
                                    const OneFormField& w_tilde);

struct PotentialFlowReport {
  double vorticity_l2 = 0.0;             // || du ||_{L2(H^2)}
  double vorticity_rel = 0.0;            // relative to || u ||_{L2}
  double best_potential_residual = 0.0;  // min over harmonic gradients of || u - df || / || u ||
  std::vector<std::complex<double>> laurent_coeffs;  // a_k at the middle probe radius
  std::vector<double> probe_radii;
  bool degenerate = false;  // zero input field
};

// Vorticity certificate plus a least-squares fit over the discrete-harmonic
// gradient subspace (modes z^k, k = -K..K, k != 0, the log-radial source and
// the circulation form).  laurent coefficients of the fitted field's complex
// derivative are exposed as diagnostics at three probe radii.
PotentialFlowReport potential_flow_test(const OneFormField& u,
                                        const WallTangential* walls = nullptr,
                                        int max_mode = 8);

struct InequalityReport {
  int samples = 0;
  std::uint64_t seed = 0;
  int poincare_pass = 0;          // a ||phi||_2 <= (1 + tol) ||grad phi||_2
  double poincare_tol = 0.02;
  double poincare_worst = 0.0;    // max of a ||phi|| / ||grad phi||
  double ladyzhenskaya_max = 0.0; // max quotient, all finite
  bool ladyzhenskaya_finite = false;
  std::vector<double> harmonic_quotients;  // ||grad dF|| / ||dF|| per mode 1..4
};

InequalityReport inequality_suite(const AnnulusGrid& grid, std::uint64_t seed,
                                  int count, double tol = 0.02);

}  // namespace hyperstokes

#endif
