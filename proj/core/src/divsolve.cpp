// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/divsolve.hpp"

#include <cmath>
#include <stdexcept>

#include "hyperstokes/calculus.hpp"
#include "hyperstokes/spectral.hpp"

namespace hyperstokes {

std::pair<OneFormField, DivergenceSolveReport> solve_divergence(
    const AnnulusGrid& g, const ScalarField& h) {
  if (h.grid != &g) throw std::invalid_argument("divergence data on wrong grid");

  // solvability: the ring integral of h must vanish
  double l1 = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) l1 += std::fabs(h.at(i, j)) * g.cell_area[i];
  }
  const double compat = integrate(h, Measure::euclidean);
  if (l1 == 0.0) {
    DivergenceSolveReport rep;
    rep.band_lo = rep.band_hi = 0;
    return {OneFormField(g, BoundaryClass::zero_both), rep};
  }
  if (std::fabs(compat) > 1e-10 * l1) {
    throw std::invalid_argument(
        "compatibility violated: the divergence data must integrate to zero "
        "over its ring (flux cancellation of the harmonic form)");
  }

  // support band of h above rounding level; the flux-telescoped data is only
  // zero to rounding outside the transition ring
  double hmax = 0.0;
  for (const double x : h.v) hmax = std::max(hmax, std::fabs(x));
  const double floor = 1e-12 * hmax;
  int lo = g.n_r, hi = 0;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      if (std::fabs(h.at(i, j)) > floor) {
        lo = std::min(lo, i);
        hi = std::max(hi, i + 1);
        break;
      }
    }
  }
  // the closure of every support cell must touch the geodesic ring
  const double pad = 1e-9 * g.spec.R0;
  if (hi - lo < 2 || g.rho_node[lo + 1] < 2.0 * g.spec.R0 - pad ||
      g.rho_node[hi - 1] > 4.0 * g.spec.R0 + pad) {
    throw std::invalid_argument(
        "divergence data escapes the geodesic ring [2 R0, 4 R0]");
  }

  SpectralSaddleSolver solver(g, OperatorKind::euclidean_h1(), lo, hi);
  ScalarField h_int(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) h_int.at(i, j) = h.at(i, j) * g.cell_area[i];
  }
  WeakFunctional zero_rhs(g);
  OneFormField w;
  ScalarField lambda;
  solver.solve(zero_rhs, h_int, w, lambda);

  DivergenceSolveReport rep;
  rep.band_lo = lo;
  rep.band_hi = hi;
  const ScalarField dw = divergence_euclid(w);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double d = dw.at(i, j) - h.at(i, j);
      num += d * d * g.cell_area[i];
      den += h.at(i, j) * h.at(i, j) * g.cell_area[i];
    }
  }
  rep.residual_l2 = std::sqrt(num);
  rep.residual_rel = std::sqrt(num / den);
  rep.grad_norm = std::sqrt(operator_energy(w, OperatorKind::euclidean_h1()));
  rep.bogovskii_ratio = rep.grad_norm / std::sqrt(den);
  return {std::move(w), rep};
}

}  // namespace hyperstokes
