// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperstokes {

WeakFunctional stokes_rhs(const CutoffField& eta, const HarmonicField& F,
                          const OneFormField& w, const AnnulusGrid& g) {
  OneFormField xi(g);  // eta dF + w
  for (int i = 0; i <= g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      xi.r_at(i, j) = eta.eta_node[i] * F.dF_flux.r_at(i, j) + w.r_at(i, j);
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      xi.th_at(i, j) = eta.eta_cellr[i] * F.dF_flux.th_at(i, j) + w.th_at(i, j);
    }
  }
  // tangential trace of eta dF + w: eta == 1 at the inner wall, 0 at the outer
  WallTangential walls;
  walls.inner = F.walls.inner;
  WeakFunctional T(g, "stokes_forcing");
  T = operator_apply(xi, OperatorKind::hyperbolic_energy(g.spec.a), &walls);
  T.scale(-1.0);
  T.label = "stokes_forcing";
  return T;
}

std::pair<OneFormField, ScalarField> solve_stokes(const SpectralSaddleSolver& solver,
                                                  const WeakFunctional& T,
                                                  StokesSolveReport* report) {
  const AnnulusGrid& g = *T.grid;
  ScalarField zero_div(g);
  OneFormField wt;
  ScalarField P;
  solver.solve(T, zero_div, wt, P);
  normalize_pressure(P, std::min(6.0 * g.spec.R0, g.R_out));
  if (report != nullptr) {
    report->rhs_dual_norm = solver.dual_norm(T);
    report->momentum_residual = weak_residual(solver, T, wt, P);
    report->momentum_residual_rel =
        report->rhs_dual_norm > 0.0 ? report->momentum_residual / report->rhs_dual_norm
                                    : report->momentum_residual;
    const ScalarField ds = codifferential(wt);
    double s = 0.0;
    for (int i = 0; i < g.n_r; ++i) {
      for (int j = 0; j < g.n_th; ++j) {
        s += ds.at(i, j) * ds.at(i, j) / g.W_cell[i] * g.cell_area[i];
      }
    }
    report->div_residual_l2 = std::sqrt(s);
    const double en = energy_inner(wt, wt);
    report->div_residual_rel =
        en > 0.0 ? report->div_residual_l2 / std::sqrt(en) : report->div_residual_l2;
  }
  return {std::move(wt), std::move(P)};
}

OneFormField assemble_solution(const CutoffField& eta, const HarmonicField& F,
                               const OneFormField& w, const OneFormField& wt) {
  const AnnulusGrid& g = *w.grid;
  OneFormField u(g, BoundaryClass::zero_inner);
  for (int i = 0; i <= g.n_r; ++i) {
    const double m = eta.eta_node[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      u.r_at(i, j) = m * F.dF_flux.r_at(i, j) + w.r_at(i, j) + wt.r_at(i, j);
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double m = eta.eta_cellr[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      u.th_at(i, j) = m * F.dF_flux.th_at(i, j) + w.th_at(i, j) + wt.th_at(i, j);
    }
  }
  return u;
}

WallTangential solution_walls(const HarmonicField& F) {
  WallTangential walls;
  walls.inner.assign(F.walls.inner.size(), 0.0);
  walls.outer.resize(F.walls.outer.size());
  for (std::size_t j = 0; j < walls.outer.size(); ++j) {
    walls.outer[j] = -F.walls.outer[j];
  }
  return walls;
}

double weak_residual(const SpectralSaddleSolver& solver, const WeakFunctional& rhs,
                     const OneFormField& w, const ScalarField& P) {
  const AnnulusGrid& g = *w.grid;
  WeakFunctional r = rhs;
  r.axpy(-1.0, operator_apply(w, OperatorKind::hyperbolic_energy(g.spec.a)));
  r.axpy(-1.0, pressure_gradient_dual(P));
  // wall rows act on pinned dofs
  for (int j = 0; j < g.n_th; ++j) {
    r.fur[g.ridx(0, j)] = 0.0;
    r.fur[g.ridx(g.n_r, j)] = 0.0;
  }
  return solver.dual_norm(r);
}

StokesSolution solve_stokes_pipeline(const AnnulusGrid& g, const HarmonicSpec& hs,
                                     CutoffProfile profile) {
  StokesSolution sol;
  const CutoffField eta = cutoff(CutoffSpec(g.spec.a, g.spec.R0, profile), g);
  const HarmonicField F = harmonic_pair(hs, g);
  const ScalarField h = divergence_rhs(eta, F, g);
  auto [w, divrep] = solve_divergence(g, h);
  sol.div_report = divrep;
  sol.div_report.c_key_lemma =
      std::sqrt(operator_energy(w, OperatorKind::bochner(g.spec.a))) /
      std::sqrt(F.l2_sq_global);
  sol.w = std::move(w);
  sol.T = stokes_rhs(eta, F, sol.w, g);
  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(g.spec.a));
  auto [wt, P] = solve_stokes(solver, sol.T, &sol.stokes_report);
  sol.w_tilde = std::move(wt);
  sol.P = std::move(P);
  sol.u = assemble_solution(eta, F, sol.w, sol.w_tilde);
  // p = P + 2 a^2 F
  sol.p_full = sol.P;
  const double a2 = g.spec.a * g.spec.a;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      sol.p_full.at(i, j) += 2.0 * a2 * F.F.at(i, j);
    }
  }
  return sol;
}

// --- pressure gluing -----------------------------------------------------------

double pressure_mean(const ScalarField& P, double rho_max) {
  const AnnulusGrid& g = *P.grid;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.n_r && g.rho_cell[i] < rho_max; ++i) {
    const double w = g.cell_area[i] / g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      num += w * P.at(i, j);
      den += w;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

void normalize_pressure(ScalarField& P, double rho_max) {
  const double m = pressure_mean(P, rho_max);
  for (auto& x : P.v) x -= m;
}

std::pair<ScalarField, GlueReport> glue_pressure(std::vector<PressureLocal> locals,
                                                 double tol) {
  if (locals.empty()) throw std::invalid_argument("no pressure locals to glue");
  std::sort(locals.begin(), locals.end(),
            [](const PressureLocal& a, const PressureLocal& b) {
              return a.i_hi < b.i_hi;
            });
  const AnnulusGrid& g = *locals.front().P.grid;
  for (const auto& loc : locals) {
    if (loc.P.grid != &g) {
      throw std::invalid_argument("pressure locals live on different grids");
    }
    if (loc.i_hi < 1 || loc.i_hi > g.n_r) {
      throw std::invalid_argument("pressure local extent out of range");
    }
  }

  GlueReport rep;
  rep.shifts.resize(locals.size(), 0.0);
  const int i_anchor = locals.front().i_hi;

  auto mean_on = [&](const ScalarField& P, int i_hi) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < i_hi; ++i) {
      const double w = g.cell_area[i] / g.W_cell[i];
      for (int j = 0; j < g.n_th; ++j) {
        num += w * P.at(i, j);
        den += w;
      }
    }
    return num / den;
  };

  // anchor the innermost local at zero mean, then match every other local to
  // it on the innermost annulus
  rep.shifts[0] = mean_on(locals[0].P, i_anchor);
  for (auto& x : locals[0].P.v) x -= rep.shifts[0];
  for (std::size_t m = 1; m < locals.size(); ++m) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < i_anchor; ++i) {
      const double w = g.cell_area[i] / g.W_cell[i];
      for (int j = 0; j < g.n_th; ++j) {
        num += w * (locals[m].P.at(i, j) - locals[0].P.at(i, j));
        den += w;
      }
    }
    rep.shifts[m] = num / den;
    for (auto& x : locals[m].P.v) x -= rep.shifts[m];
  }

  // overlap agreement: local m vs the next larger one, on the smaller extent
  rep.overlap_gaps.resize(locals.size() - 1, 0.0);
  for (std::size_t m = 0; m + 1 < locals.size(); ++m) {
    double s = 0.0, area = 0.0;
    for (int i = 0; i < locals[m].i_hi; ++i) {
      const double w = g.cell_area[i] / g.W_cell[i];
      for (int j = 0; j < g.n_th; ++j) {
        const double d = locals[m + 1].P.at(i, j) - locals[m].P.at(i, j);
        s += w * d * d;
        area += w;
      }
    }
    rep.overlap_gaps[m] = std::sqrt(s / area);
    rep.max_gap = std::max(rep.max_gap, rep.overlap_gaps[m]);
  }
  if (rep.max_gap > tol) {
    throw std::runtime_error(
        "pressure locals disagree on an overlap after constant normalization "
        "(inconsistent local recoveries): gap " +
        std::to_string(rep.max_gap));
  }

  ScalarField glued = locals.back().P;
  return {std::move(glued), std::move(rep)};
}

ScalarField recover_pressure_local(const AnnulusGrid& g, int i_hi,
                                   const WeakFunctional& momentum_dual) {
  SpectralPressureRecovery rec(g, i_hi);
  return rec.solve(momentum_dual);
}

}  // namespace hyperstokes
