// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/navierstokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hyperstokes/probes.hpp"

namespace hyperstokes {

void SolverOptions::validate() const {
  if (lambda_schedule.empty()) {
    throw std::invalid_argument("lambda schedule must not be empty");
  }
  double prev = 0.0;
  for (double l : lambda_schedule) {
    if (!(l > prev) || l > 1.0) {
      throw std::invalid_argument("lambda schedule must increase within (0, 1]");
    }
    prev = l;
  }
  if (lambda_schedule.back() != 1.0) {
    throw std::invalid_argument("lambda schedule must end at 1");
  }
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
  if (picard_max_iters < 1) throw std::invalid_argument("picard_max_iters must be >= 1");
  if (damping < 0.0 || damping >= 1.0) {
    throw std::invalid_argument("damping must lie in [0, 1)");
  }
}

void ExhaustionSchedule::validate(const DomainSpec& spec) const {
  if (R_m.empty()) throw std::invalid_argument("exhaustion schedule is empty");
  double prev = 5.0 * spec.R0;
  for (double R : R_m) {
    if (!(R > prev)) {
      throw std::invalid_argument(
          "exhaustion radii must be strictly increasing and exceed 5 R0");
    }
    prev = R;
  }
}

PsiPhi assemble_psi_phi(const CutoffField& eta, const HarmonicField& F,
                        const OneFormField& w, const AnnulusGrid& g) {
  PsiPhi pp;
  pp.Psi = OneFormField(g, BoundaryClass::zero_inner);
  for (int i = 0; i <= g.n_r; ++i) {
    const double m = eta.eta_node[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      pp.Psi.r_at(i, j) = m * F.dF_flux.r_at(i, j) + w.r_at(i, j);
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double m = eta.eta_cellr[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      pp.Psi.th_at(i, j) = m * F.dF_flux.th_at(i, j) + w.th_at(i, j);
    }
  }
  pp.psi_walls.inner.assign(g.n_th, 0.0);
  pp.psi_walls.outer.resize(g.n_th);
  const double m_out = eta.eta_node[g.n_r] - 1.0;
  for (int j = 0; j < g.n_th; ++j) {
    pp.psi_walls.outer[j] = m_out * F.walls.outer[j];
  }

  pp.Phi_linear =
      operator_apply(pp.Psi, OperatorKind::hyperbolic_energy(g.spec.a), &pp.psi_walls);
  pp.Phi_linear.scale(-1.0);
  pp.Phi_linear.label = "forcing_linear";

  pp.Phi_convective = WeakFunctional(g, "forcing_convective");
  add_trilinear_dual(pp.Psi, pp.Psi, -1.0, pp.Phi_convective);

  pp.Phi = pp.Phi_linear;
  pp.Phi.axpy(1.0, pp.Phi_convective);
  pp.Phi.label = "forcing";

  const ScalarField ds = codifferential(pp.Psi);
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      s += ds.at(i, j) * ds.at(i, j) / g.W_cell[i] * g.cell_area[i];
    }
  }
  const double h1 = std::sqrt(h1_grad_sq(pp.Psi) + l2_inner(pp.Psi, pp.Psi));
  pp.div_residual_rel = h1 > 0.0 ? std::sqrt(s) / h1 : std::sqrt(s);
  return pp;
}

ConstantsReport estimate_constants(const AnnulusGrid& g, const CutoffField& eta,
                                   const OneFormField& w_unit, const PsiPhi& psi_unit,
                                   double dF_l2_unit, int samples,
                                   std::uint64_t seed) {
  (void)eta;
  ConstantsReport rep;
  rep.seed = seed;
  rep.samples = samples;
  const double a = g.spec.a;
  std::mt19937_64 rng(seed);

  for (int s = 0; s < samples; ++s) {
    const OneFormField phi =
        (s % 2 == 0) ? random_zero_boundary(g, rng) : random_divfree(g, rng);
    const FieldNorms n = norms(phi);
    const double grad = std::sqrt(h1_grad_sq(phi));
    if (grad <= 0.0) continue;
    rep.C_poincare = std::max(rep.C_poincare, a * n.l2 / grad);
    rep.C_l4_grad = std::max(rep.C_l4_grad, n.l4 / grad);
    rep.C_ladyzhenskaya =
        std::max(rep.C_ladyzhenskaya,
                 n.l4 / std::sqrt(n.l2 * (n.l2 + grad)));
    const double b_psi = std::fabs(trilinear(phi, psi_unit.Psi, phi));
    rep.c_ninety = std::max(rep.c_ninety, b_psi / (grad * grad * dF_l2_unit));
  }

  // a few inverse power steps sharpen the worst constant-curvature quotient
  {
    SpectralDirichletSolver inv(g, OperatorKind::bochner(a));
    std::mt19937_64 prng(seed ^ 0x9e3779b97f4a7c15ull);
    OneFormField phi = random_zero_boundary(g, prng);
    for (int it = 0; it < 8; ++it) {
      WeakFunctional mass(g);
      for (int i = 0; i <= g.n_r; ++i) {
        for (int j = 0; j < g.n_th; ++j) {
          mass.fur[g.ridx(i, j)] = g.rface_area[i] * phi.r_at(i, j);
        }
      }
      for (int i = 0; i < g.n_r; ++i) {
        for (int j = 0; j < g.n_th; ++j) {
          mass.futh[g.cidx(i, j)] = g.cell_area[i] * phi.th_at(i, j);
        }
      }
      OneFormField z;
      inv.solve(mass, z);
      const double nz = std::sqrt(l2_inner(z, z));
      if (nz == 0.0) break;
      for (auto& x : z.ur) x /= nz;
      for (auto& x : z.uth) x /= nz;
      phi = std::move(z);
    }
    const double grad = std::sqrt(h1_grad_sq(phi));
    if (grad > 0.0) {
      rep.C_poincare = std::max(rep.C_poincare, a * std::sqrt(l2_inner(phi, phi)) / grad);
    }
  }

  for (int n = 1; n <= 4; ++n) {
    const HarmonicField Fh = harmonic_pair(HarmonicSpec(n, 1.0), g);
    const double l2 = std::sqrt(l2_inner(Fh.dF, Fh.dF));
    rep.C_harmonic = std::max(rep.C_harmonic, std::sqrt(h1_grad_sq(Fh.dF)) / l2);
  }

  const FieldNorms npsi = norms(psi_unit.Psi);
  rep.c_grad_psi = std::sqrt(h1_grad_sq(psi_unit.Psi)) / dF_l2_unit;
  rep.c_psi_l4 = npsi.l4 / dF_l2_unit;
  rep.c_psi_l2 = npsi.l2 / dF_l2_unit;
  const FieldNorms nw = norms(w_unit);
  rep.c_w_l4 = nw.l4 / dF_l2_unit;
  rep.c_grad_w = std::sqrt(h1_grad_sq(w_unit)) / dF_l2_unit;

  SpectralSaddleSolver dual_solver(g, OperatorKind::hyperbolic_energy(a));
  rep.c_phi_lin = dual_solver.dual_norm(psi_unit.Phi_linear) / dF_l2_unit;
  rep.c_phi_quad =
      dual_solver.dual_norm(psi_unit.Phi_convective) / (dF_l2_unit * dF_l2_unit);

  rep.C_aR0 = 2.0 * std::max({rep.C_l4_grad, rep.c_grad_psi, rep.c_psi_l4,
                              rep.c_psi_l2, rep.c_w_l4, rep.c_grad_w,
                              rep.c_phi_lin, rep.c_phi_quad, rep.c_ninety});
  rep.dF_threshold = 1.0 / (2.0 * rep.C_aR0);
  return rep;
}

NsSolveResult solve_ns_annulus(const SpectralSaddleSolver& solver, const PsiPhi& pp,
                               double dF_l2, double dF_threshold,
                               const SolverOptions& opts) {
  const AnnulusGrid& g = *pp.Psi.grid;
  if (dF_l2 >= dF_threshold && !opts.allow_large_data) {
    throw std::invalid_argument(
        "smallness condition violated: ||dF|| = " + std::to_string(dF_l2) +
        " >= threshold 1/(2 C(a,R0)) = " + std::to_string(dF_threshold) +
        " (pass the explicit large-data override to proceed)");
  }

  NsSolveResult res;
  OneFormField theta(g, BoundaryClass::zero_both);
  ScalarField P(g);
  ScalarField zero_div(g);

  for (double lambda : opts.lambda_schedule) {
    PicardStageTrace stage;
    stage.lambda = lambda;
    double prev_inc = -1.0;
    int grow_streak = 0;
    for (int it = 0; it < opts.picard_max_iters; ++it) {
      WeakFunctional rhs = pp.Phi;
      add_trilinear_dual(theta, pp.Psi, -1.0, rhs);
      add_trilinear_dual(pp.Psi, theta, -1.0, rhs);
      add_trilinear_dual(theta, theta, -1.0, rhs);
      rhs.scale(lambda);

      OneFormField next;
      solver.solve(rhs, zero_div, next, P);
      if (opts.damping > 0.0) {
        for (std::size_t k = 0; k < next.ur.size(); ++k) {
          next.ur[k] = (1.0 - opts.damping) * next.ur[k] + opts.damping * theta.ur[k];
        }
        for (std::size_t k = 0; k < next.uth.size(); ++k) {
          next.uth[k] = (1.0 - opts.damping) * next.uth[k] + opts.damping * theta.uth[k];
        }
      }
      OneFormField diff = next;
      for (std::size_t k = 0; k < diff.ur.size(); ++k) diff.ur[k] -= theta.ur[k];
      for (std::size_t k = 0; k < diff.uth.size(); ++k) diff.uth[k] -= theta.uth[k];
      const double inc = std::sqrt(energy_inner(diff, diff));
      stage.increments.push_back(inc);
      ++stage.iterations;
      theta = std::move(next);

      const double scale = std::sqrt(energy_inner(theta, theta));
      if (inc <= opts.picard_tol * std::max(scale, 1e-30)) break;
      if (prev_inc >= 0.0 && inc > prev_inc) {
        if (++grow_streak >= 5) {
          throw std::runtime_error(
              "fixed-point iteration diverging (5 growing increments): reduce "
              "||dF|| or densify the continuation schedule");
        }
      } else {
        grow_streak = 0;
      }
      prev_inc = inc;
    }
    res.trace.total_iterations += stage.iterations;
    const double scale = std::sqrt(energy_inner(theta, theta));
    res.trace.converged = stage.increments.empty() ||
                          stage.increments.back() <=
                              opts.picard_tol * std::max(scale, 1e-30);
    if (lambda == opts.lambda_schedule.back() && stage.increments.size() >= 2) {
      double ratio = 0.0;
      for (std::size_t k = 1; k + 1 < stage.increments.size(); ++k) {
        if (stage.increments[k - 1] > 0.0) {
          ratio = std::max(ratio, stage.increments[k] / stage.increments[k - 1]);
        }
      }
      res.trace.contraction_ratio = ratio;
    }
    if (!stage.increments.empty()) {
      res.trace.final_increment = stage.increments.back();
    }
    res.trace.stages.push_back(std::move(stage));
    if (!res.trace.converged) {
      throw std::runtime_error("fixed-point iteration did not converge within "
                               "the iteration budget");
    }
  }

  normalize_pressure(P, std::min(6.0 * g.spec.R0, g.R_out));
  res.w_R = std::move(theta);
  res.P = std::move(P);

  res.energy_identity_residual = check_energy_identity(res.w_R, pp);
  res.cancellation_psi = trilinear(pp.Psi, res.w_R, res.w_R);
  res.cancellation_self = trilinear(res.w_R, res.w_R, res.w_R);

  WeakFunctional rhs = pp.Phi;
  add_trilinear_dual(res.w_R, pp.Psi, -1.0, rhs);
  add_trilinear_dual(pp.Psi, res.w_R, -1.0, rhs);
  add_trilinear_dual(res.w_R, res.w_R, -1.0, rhs);
  const double rn = solver.dual_norm(pp.Phi);
  const double mr = weak_residual(solver, rhs, res.w_R, res.P);
  res.momentum_residual_rel = rn > 0.0 ? mr / rn : mr;
  return res;
}

double check_energy_identity(const OneFormField& w_R, const PsiPhi& pp) {
  const double en = energy_inner(w_R, w_R);
  if (en == 0.0) return 0.0;
  const double rhs = pp.Phi.act(w_R) - trilinear(w_R, pp.Psi, w_R);
  return std::fabs(en - rhs) / en;
}

AprioriCheck check_apriori_bound(const OneFormField& w_R, double dF_l2, double C_aR0) {
  AprioriCheck c;
  c.lhs = h1_grad_sq(w_R);
  const double denom = 1.0 - 2.0 * C_aR0 * dF_l2;
  if (denom <= 0.0) {
    c.rhs = std::numeric_limits<double>::infinity();
    c.satisfied = true;
    return c;
  }
  const double s = C_aR0 * (dF_l2 + dF_l2 * dF_l2);
  c.rhs = s * s / denom;
  c.satisfied = c.lhs <= c.rhs;
  return c;
}

// --- exhaustion ------------------------------------------------------------------

namespace {
// energy norm of (b - a) restricted to the first i_common cells; both fields
// live on nested grids sharing those cells
double restricted_h1_diff(const OneFormField& ua, const OneFormField& ub,
                          int i_common) {
  const AnnulusGrid& g = *ua.grid;
  const AnnulusGrid& gb = *ub.grid;
  const double a2 = g.spec.a * g.spec.a;
  double s = 0.0;
  for (int i = 0; i <= i_common; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double d = ub.ur[gb.ridx(i, j)] - ua.ur[g.ridx(i, j)];
      s += 2.0 * a2 * g.rface_area[i] * d * d;
    }
  }
  for (int i = 0; i < i_common; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double d = ub.uth[gb.cidx(i, j)] - ua.uth[g.cidx(i, j)];
      s += 2.0 * a2 * g.cell_area[i] * d * d;
    }
  }
  // interior vertex curls of the difference
  for (int i = 1; i < i_common; ++i) {
    const double w = g.vertex_area[i] * g.W_node[i];
    const double r = g.r_node_v(i);
    for (int j = 0; j < g.n_th; ++j) {
      const int jp = g.jprev(j);
      const double da_th =
          (g.r_cell_v(i) * (ub.uth[gb.cidx(i, j)] - ua.uth[g.cidx(i, j)]) -
           g.r_cell_v(i - 1) * (ub.uth[gb.cidx(i - 1, j)] - ua.uth[g.cidx(i - 1, j)])) /
          (r * g.dr_vertex[i]);
      const double da_r = ((ub.ur[gb.ridx(i, j)] - ua.ur[g.ridx(i, j)]) -
                           (ub.ur[gb.ridx(i, jp)] - ua.ur[g.ridx(i, jp)])) /
                          (r * g.dtheta);
      const double c = da_th - da_r;
      s += w * c * c;
    }
  }
  return std::sqrt(s);
}
}  // namespace

ExhaustionResult exhaust_domains(const DomainSpec& spec, const HarmonicSpec& hs,
                                 const ExhaustionSchedule& schedule,
                                 const SolverOptions& opts, CutoffProfile profile) {
  schedule.validate(spec);
  ExhaustionResult out;

  // shared log-radial spacing so stage grids are nested node-for-node
  const DiskRadius r_in = geodesic_to_disk(spec.a, spec.R0);
  const double t_in = std::log(r_in.r);
  const DiskRadius r1 = geodesic_to_disk(spec.a, schedule.R_m.front());
  const double dt = (std::log1p(-r1.one_minus) - t_in) / schedule.n_r_first;

  std::vector<AnnulusGrid> grids;
  std::vector<int> extents;
  for (double R : schedule.R_m) {
    const DiskRadius r = geodesic_to_disk(spec.a, R);
    const int n_r = static_cast<int>(
        std::ceil((std::log1p(-r.one_minus) - t_in) / dt - 1e-12));
    const double R_eff =
        disk_to_geodesic(spec.a, DiskRadius::from_log(t_in + n_r * dt));
    grids.push_back(build_annulus_grid(spec, spec.R0, R_eff, n_r, schedule.n_th));
    extents.push_back(n_r);
  }

  std::vector<OneFormField> solutions;
  double threshold = 0.0, dF_l2 = 0.0;
  PsiPhi pp_final;
  const AnnulusGrid* g_final = nullptr;

  for (std::size_t m = 0; m < grids.size(); ++m) {
    const AnnulusGrid& g = grids[m];
    const CutoffField eta = cutoff(CutoffSpec(spec.a, spec.R0, profile), g);
    const HarmonicField F = harmonic_pair(hs, g);
    const ScalarField h = divergence_rhs(eta, F, g);
    auto [w, divrep] = solve_divergence(g, h);
    PsiPhi pp = assemble_psi_phi(eta, F, w, g);
    dF_l2 = std::sqrt(F.l2_sq_global);

    if (m == 0) {
      // the smallness gate uses constants from the first stage
      const HarmonicField Fu = harmonic_pair(HarmonicSpec(hs.n, 1.0, hs.phase), g);
      const ScalarField hu = divergence_rhs(eta, Fu, g);
      auto [wu, du] = solve_divergence(g, hu);
      const PsiPhi ppu = assemble_psi_phi(eta, Fu, wu, g);
      const ConstantsReport consts = estimate_constants(
          g, eta, wu, ppu, std::sqrt(Fu.l2_sq_global), 24, 20250607ull);
      threshold = consts.dF_threshold;
    }

    SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(spec.a));
    NsSolveResult res = solve_ns_annulus(solver, pp, dF_l2, threshold, opts);

    ExhaustionStage st;
    st.R = g.R_out;
    st.n_r = g.n_r;
    st.h1_norm = std::sqrt(h1_grad_sq(res.w_R) + l2_inner(res.w_R, res.w_R));
    st.energy_identity_residual = res.energy_identity_residual;
    st.apriori_satisfied = true;
    out.stages.push_back(st);
    solutions.push_back(std::move(res.w_R));
    if (m + 1 == grids.size()) {
      pp_final = std::move(pp);
      g_final = &g;
    }
  }

  for (std::size_t m = 0; m + 1 < solutions.size(); ++m) {
    out.cauchy_deltas.push_back(
        restricted_h1_diff(solutions[m], solutions[m + 1], extents.front()));
  }

  // pressure locals for the final stage, recovered independently per annulus
  if (g_final != nullptr && solutions.size() >= 1) {
    const OneFormField& w = solutions.back();
    WeakFunctional l = pp_final.Phi;
    add_trilinear_dual(w, pp_final.Psi, -1.0, l);
    add_trilinear_dual(pp_final.Psi, w, -1.0, l);
    add_trilinear_dual(w, w, -1.0, l);
    l.axpy(-1.0, operator_apply(w, OperatorKind::hyperbolic_energy(spec.a)));
    l.scale(-1.0);  // l = K w + nonlinear - Phi = -residual = B^H p
    std::vector<PressureLocal> locals;
    for (std::size_t m = 0; m < extents.size(); ++m) {
      locals.push_back({extents[m], recover_pressure_local(*g_final, extents[m], l)});
    }
    auto [glued, grep] = glue_pressure(std::move(locals));
    out.pressure_overlap_gaps = grep.overlap_gaps;
    out.pressure_max_gap = grep.max_gap;
  }
  return out;
}

}  // namespace hyperstokes
