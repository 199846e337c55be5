// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_DIVSOLVE_HPP
#define HYPERSTOKES_DIVSOLVE_HPP

#include <utility>

#include "hyperstokes/field.hpp"

namespace hyperstokes {

struct DivergenceSolveReport {
  double residual_l2 = 0.0;       // || div w - h ||_2 over the grid
  double residual_rel = 0.0;      // relative to || h ||_2
  double grad_norm = 0.0;         // Euclidean H1_0 seminorm of w
  double bogovskii_ratio = 0.0;   // grad_norm / || h ||_2 (flat constant)
  double c_key_lemma = 0.0;       // hyperbolic || grad w || / || dF ||, filled by callers
  int band_lo = 0, band_hi = 0;   // radial cell band the solve ran on
  int iterations = 1;             // direct solve: one factorization pass
};

// Finds the minimum-Dirichlet-energy w with div w = h on the support band of
// h and w = 0 on the band walls; the returned field is the zero extension to
// the whole grid.  Requires the compatibility integral of h to vanish
// (relative to ||h||_L1) and h to be supported in the geodesic ring
// [2 R0, 4 R0].
std::pair<OneFormField, DivergenceSolveReport> solve_divergence(
    const AnnulusGrid& grid, const ScalarField& h);

}  // namespace hyperstokes

#endif
