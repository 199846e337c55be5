// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "hyperstokes/divsolve.hpp"
#include "hyperstokes/navierstokes.hpp"
#include "hyperstokes/report.hpp"
#include "hyperstokes/stokes.hpp"
#include "hyperstokes/verify.hpp"

namespace hyperstokes {

namespace {

void dump_field(const std::string& dir, const std::string& name, const auto& field) {
  std::ofstream out(dir + "/" + name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  dump_csv(out, field);
}

// the grid is owned by the caller: every field below references it
struct StokesArtifacts {
  CutoffField eta;
  HarmonicField F;
  OneFormField w;
  DivergenceSolveReport divrep;
  WeakFunctional T;
  OneFormField wt;
  ScalarField P;
  StokesSolveReport strep;
  OneFormField u;
};

StokesArtifacts stokes_core(const RunConfig& cfg, const AnnulusGrid& g,
                            Report& rep) {
  StokesArtifacts art;
  art.eta = cutoff(CutoffSpec(cfg.a, cfg.R0, cfg.profile), g);
  art.F = harmonic_pair(HarmonicSpec(cfg.n, cfg.c, cfg.phase), g);
  const ScalarField h = divergence_rhs(art.eta, art.F, g);

  double h_l1 = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) h_l1 += std::fabs(h.at(i, j)) * g.cell_area[i];
  }
  const double compat = compatibility(h);
  rep.scalar("compatibility_integral", compat,
             "ring integral of the divergence data");
  rep.check("divergence.compatibility", std::fabs(compat) <= 1e-10 * h_l1,
            std::fabs(compat), 1e-10 * h_l1,
            "flux cancellation of the harmonic gradient across the ring");

  auto [w, divrep] = solve_divergence(g, h);
  art.w = std::move(w);
  art.divrep = divrep;
  rep.scalar("divergence_residual_rel", divrep.residual_rel,
             "div w matches g(d eta, dF) on the ring");
  rep.check("divergence.residual", divrep.residual_rel <= 1e-8,
            divrep.residual_rel, 1e-8, "div w = g(d eta, dF)");
  double outside = 0.0;
  for (int i = 0; i <= g.n_r; ++i) {
    if (i > divrep.band_lo && i < divrep.band_hi) continue;
    for (int j = 0; j < g.n_th; ++j) {
      outside = std::max(outside, std::fabs(art.w.ur[g.ridx(i, j)]));
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    if (i >= divrep.band_lo && i < divrep.band_hi) continue;
    for (int j = 0; j < g.n_th; ++j) {
      outside = std::max(outside, std::fabs(art.w.uth[g.cidx(i, j)]));
    }
  }
  rep.check("divergence.support", outside == 0.0, outside, 0.0,
            "w is the zero extension beyond the transition ring");
  rep.scalar("bogovskii_ratio", divrep.bogovskii_ratio,
             "empirical gradient-to-data constant of the divergence solve");

  art.T = stokes_rhs(art.eta, art.F, art.w, g);
  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(cfg.a));
  auto [wt, P] = solve_stokes(solver, art.T, &art.strep);
  art.wt = std::move(wt);
  art.P = std::move(P);
  rep.scalar("stokes_rhs_dual_norm", art.strep.rhs_dual_norm,
             "dual norm of the variational forcing");
  rep.check("stokes.momentum_residual", art.strep.momentum_residual_rel <= 1e-8,
            art.strep.momentum_residual_rel, 1e-8,
            "((w~, phi)) = <T, phi> for divergence-free phi");
  rep.check("stokes.div_residual", art.strep.div_residual_rel <= 1e-8,
            art.strep.div_residual_rel, 1e-8, "d* w~ = 0");

  art.u = assemble_solution(art.eta, art.F, art.w, art.wt);
  double trace = 0.0;
  for (int j = 0; j < g.n_th; ++j) {
    trace = std::max(trace, std::fabs(art.u.ur[g.ridx(0, j)]));
  }
  rep.check("solution.inner_trace", trace <= 1e-13, trace, 1e-13,
            "u vanishes on the obstacle circle");

  const NontrivialityReport nt = nontriviality(art.w, art.F, art.eta, art.u);
  rep.scalar("pairing", nt.pairing, "pairing of the corrector with dF");
  rep.scalar("eta_energy", nt.eta_energy, "cutoff-weighted harmonic energy");
  rep.scalar("u_h1_norm", nt.u_h1_norm, "H1 norm of the assembled solution");
  rep.check("nontriviality.sign", nt.sign_ok, nt.pairing, 0.0,
            "the corrector pairing with dF is strictly negative");
  rep.check("nontriviality.identity", nt.gap_rel <= 0.005, nt.gap_rel, 0.005,
            "pairing equals minus the cutoff-weighted harmonic energy");
  return art;
}

int run_stokes(const RunConfig& cfg, Report& rep) {
  const AnnulusGrid grid = build_annulus_grid(DomainSpec(cfg.a, cfg.R0), cfg.R0,
                                              cfg.R_max, cfg.n_r, cfg.n_th);
  StokesArtifacts art = stokes_core(cfg, grid, rep);
  std::filesystem::create_directories(cfg.out_dir);
  dump_field(cfg.out_dir, "u.csv", art.u);
  dump_field(cfg.out_dir, "w.csv", art.w);
  dump_field(cfg.out_dir, "w_tilde.csv", art.wt);
  dump_field(cfg.out_dir, "P.csv", art.P);
  return 0;
}

int run_verify(const RunConfig& cfg, Report& rep) {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(cfg.a, cfg.R0), cfg.R0,
                                           cfg.R_max, cfg.n_r, cfg.n_th);
  StokesArtifacts art = stokes_core(cfg, g, rep);

  const NonzeroCertificate cert = nonzero_solution(art.u, art.F, art.eta, art.wt);
  rep.scalar("nonzero_certificate", cert.certificate,
             "complement-weighted harmonic energy (positive)");
  rep.check("nonzero.h1", cert.h1_norm > 1e-2, cert.h1_norm, 1e-2,
            "the assembled solution has nonvanishing H1 norm");
  rep.check("orthogonality.wtilde_dF", cert.wtilde_dF_rel <= 1e-6,
            cert.wtilde_dF_rel, 1e-6,
            "the variational part is L2-orthogonal to the harmonic gradient");

  const WallTangential uw = solution_walls(art.F);
  const PotentialFlowReport pf = potential_flow_test(art.u, &uw);
  rep.scalar("vorticity_l2", pf.vorticity_l2, "L2 norm of du");
  rep.scalar("vorticity_rel", pf.vorticity_rel, "du stays away from zero");
  rep.scalar("best_potential_residual", pf.best_potential_residual,
             "distance of u to the harmonic-gradient subspace");
  rep.check("potential.vorticity", pf.vorticity_rel >= 1e-3, pf.vorticity_rel,
            1e-3, "the solution is not a potential flow");
  rep.check("potential.residual", pf.best_potential_residual >= 0.05,
            pf.best_potential_residual, 0.05,
            "no harmonic gradient approximates the solution");

  const PotentialFlowReport ctrl = potential_flow_test(art.F.dF_flux, &art.F.walls);
  rep.scalar("control_vorticity_rel", ctrl.vorticity_rel,
             "potential control: du of a harmonic gradient");
  rep.check("potential.control", ctrl.best_potential_residual <= 1e-6,
            ctrl.best_potential_residual, 1e-6,
            "a harmonic gradient is recognized as potential flow");

  const InequalityReport iq = inequality_suite(g, cfg.seed, cfg.samples);
  rep.scalar("poincare_worst", iq.poincare_worst,
             "sup of a ||phi||_2 / ||grad phi||_2 over the probe set");
  rep.check("inequalities.poincare", iq.poincare_pass == iq.samples,
            double(iq.poincare_pass), double(iq.samples),
            "a ||phi||_2 <= (1 + tol) ||grad phi||_2 for every probe");
  rep.check("inequalities.ladyzhenskaya", iq.ladyzhenskaya_finite,
            iq.ladyzhenskaya_max, 0.0,
            "the interpolation quotient stays finite on every probe");
  for (std::size_t k = 0; k < iq.harmonic_quotients.size(); ++k) {
    rep.scalar("harmonic_quotient_n" + std::to_string(k + 1),
               iq.harmonic_quotients[k],
               "||grad dF|| / ||dF|| for the explicit harmonic family");
  }

  std::filesystem::create_directories(cfg.out_dir);
  dump_field(cfg.out_dir, "u.csv", art.u);
  dump_field(cfg.out_dir, "w.csv", art.w);
  dump_field(cfg.out_dir, "w_tilde.csv", art.wt);
  dump_field(cfg.out_dir, "P.csv", art.P);
  return 0;
}

int run_ns(const RunConfig& cfg, Report& rep) {
  const DomainSpec spec(cfg.a, cfg.R0);
  const AnnulusGrid g =
      build_annulus_grid(spec, cfg.R0, cfg.R_max, cfg.n_r, cfg.n_th);
  const CutoffField eta = cutoff(CutoffSpec(cfg.a, cfg.R0, cfg.profile), g);

  // amplitude-invariant constants from a unit-amplitude run
  const HarmonicField Fu = harmonic_pair(HarmonicSpec(cfg.n, 1.0, cfg.phase), g);
  const ScalarField hu = divergence_rhs(eta, Fu, g);
  auto [wu, divrep_u] = solve_divergence(g, hu);
  const PsiPhi ppu = assemble_psi_phi(eta, Fu, wu, g);
  const ConstantsReport consts = estimate_constants(
      g, eta, wu, ppu, std::sqrt(Fu.l2_sq_global), cfg.samples, cfg.seed);
  rep.scalar("C_poincare", consts.C_poincare, "curvature-scaled L2-gradient bound");
  rep.scalar("C_aR0", consts.C_aR0, "aggregate small-data constant");
  rep.scalar("dF_threshold", consts.dF_threshold,
             "smallness threshold 1/(2 C(a,R0))");
  rep.check("constants.poincare_bound", consts.C_poincare <= 1.02,
            consts.C_poincare, 1.02,
            "the empirical curvature-Poincare constant stays near 1");

  const HarmonicField F = harmonic_pair(HarmonicSpec(cfg.n, cfg.c, cfg.phase), g);
  const double dF_l2 = std::sqrt(F.l2_sq_global);
  rep.scalar("dF_l2", dF_l2, "harmonic datum size vs the smallness threshold");

  const ScalarField h = divergence_rhs(eta, F, g);
  auto [w, divrep] = solve_divergence(g, h);
  const PsiPhi pp = assemble_psi_phi(eta, F, w, g);
  rep.scalar("psi_div_residual_rel", pp.div_residual_rel,
             "d* Psi = 0 for the divergence-corrected background");
  rep.check("ns.psi_divfree", pp.div_residual_rel <= 1e-8, pp.div_residual_rel,
            1e-8, "d* Psi = 0");

  SolverOptions opts;
  opts.lambda_schedule = cfg.lambda_schedule;
  opts.picard_tol = cfg.picard_tol;
  opts.picard_max_iters = cfg.picard_max_iters;
  opts.damping = cfg.damping;
  opts.allow_large_data = cfg.allow_large_data;
  opts.validate();

  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(cfg.a));
  const NsSolveResult res =
      solve_ns_annulus(solver, pp, dF_l2, consts.dF_threshold, opts);

  rep.scalar("picard_iterations", res.trace.total_iterations,
             "fixed-point iterations over the continuation schedule");
  rep.scalar("contraction_ratio", res.trace.contraction_ratio,
             "empirical contraction of the fixed-point map");
  rep.check("ns.converged", res.trace.converged, res.trace.final_increment,
            cfg.picard_tol, "the fixed-point iteration converged");
  rep.check("ns.energy_identity", res.energy_identity_residual <= 1e-8,
            res.energy_identity_residual, 1e-8,
            "((w,w)) balances the forcing minus the mixed convection term");
  const double en = energy_inner(res.w_R, res.w_R);
  const double scale = 1e-10 * std::max(1.0, en);
  rep.check("ns.cancellation_mixed", std::fabs(res.cancellation_psi) <= scale,
            std::fabs(res.cancellation_psi), scale,
            "b(Psi, w, w) vanishes for the divergence-free background");
  rep.check("ns.cancellation_self", std::fabs(res.cancellation_self) <= scale,
            std::fabs(res.cancellation_self), scale, "b(w, w, w) vanishes");

  const AprioriCheck ap = check_apriori_bound(res.w_R, dF_l2, consts.C_aR0);
  rep.scalar("apriori_lhs", ap.lhs, "gradient energy of the solution");
  rep.scalar("apriori_rhs", ap.rhs, "small-data a priori bound");
  rep.check("ns.apriori", ap.satisfied, ap.lhs, ap.rhs,
            "the gradient bound of the small-data theory holds");

  for (const auto& st : res.trace.stages) {
    rep.trace("picard_increments_lambda_" + std::to_string(st.lambda),
              st.increments);
  }

  if (!cfg.schedule.empty()) {
    ExhaustionSchedule sched;
    sched.R_m = cfg.schedule;
    sched.n_r_first = cfg.n_r;
    sched.n_th = cfg.n_th;
    const ExhaustionResult ex = exhaust_domains(spec, HarmonicSpec(cfg.n, cfg.c, cfg.phase),
                                                sched, opts, cfg.profile);
    rep.trace("exhaustion_cauchy_deltas", ex.cauchy_deltas);
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < ex.cauchy_deltas.size(); ++k) {
      if (!(ex.cauchy_deltas[k + 1] < ex.cauchy_deltas[k])) decreasing = false;
    }
    rep.check("exhaustion.cauchy_decreasing",
              decreasing && !ex.cauchy_deltas.empty(),
              ex.cauchy_deltas.empty() ? 0.0 : ex.cauchy_deltas.back(), 0.0,
              "truncation differences shrink as the domains grow");
    rep.check("exhaustion.pressure_glue", ex.pressure_max_gap <= 1e-8,
              ex.pressure_max_gap, 1e-8,
              "locally recovered pressures agree after constant matching");
  }

  std::filesystem::create_directories(cfg.out_dir);
  dump_field(cfg.out_dir, "w_R.csv", res.w_R);
  dump_field(cfg.out_dir, "P.csv", res.P);
  dump_field(cfg.out_dir, "psi.csv", pp.Psi);
  return 0;
}

int run_sweep(const RunConfig& cfg, Report& rep) {
  std::vector<double> gaps, pairings, h1s, vorts;
  for (double value : cfg.sweep_values) {
    RunConfig sub = cfg;
    sub.mode = RunMode::stokes;
    if (cfg.sweep_param == "grid") {
      sub.n_r = static_cast<int>(value);
      sub.n_th = 2 * sub.n_r;
    } else if (cfg.sweep_param == "R_max") {
      sub.R_max = value;
    } else if (cfg.sweep_param == "c") {
      sub.c = value;
    } else {
      sub.n = static_cast<int>(value);
    }
    const std::string tag = cfg.sweep_param + "_" + std::to_string(value);
    try {
      sub.validate();
      Report subrep(config_echo(sub));
      const AnnulusGrid grid = build_annulus_grid(
          DomainSpec(sub.a, sub.R0), sub.R0, sub.R_max, sub.n_r, sub.n_th);
      StokesArtifacts art = stokes_core(sub, grid, subrep);
      const NontrivialityReport nt = nontriviality(art.w, art.F, art.eta, art.u);
      const WallTangential uw = solution_walls(art.F);
      const double vort = std::sqrt(
          vorticity_l2_sq(art.u, Measure::hyperbolic, &uw));
      gaps.push_back(nt.gap_rel);
      pairings.push_back(nt.pairing);
      h1s.push_back(nt.u_h1_norm);
      vorts.push_back(vort);
      rep.scalar("row_" + tag + "_pairing", nt.pairing, "sweep row");
      rep.scalar("row_" + tag + "_gap_rel", nt.gap_rel, "sweep row");
      rep.scalar("row_" + tag + "_u_h1", nt.u_h1_norm, "sweep row");
      rep.scalar("row_" + tag + "_vorticity", vort, "sweep row");
      rep.check("sweep.row_" + tag, subrep.all_passed(),
                double(subrep.failures()), 0.0, "all row checks passed");
    } catch (const std::exception& e) {
      rep.check("sweep.row_" + tag, false, 1.0, 0.0,
                std::string("row failed: ") + e.what());
    }
  }
  if (cfg.sweep_param == "grid" && gaps.size() >= 2) {
    // Richardson: convergence order of the pairing identity gap
    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
      if (gaps[k + 1] > 0.0) orders.push_back(std::log2(gaps[k] / gaps[k + 1]));
    }
    if (!orders.empty()) {
      const double worst = *std::min_element(orders.begin(), orders.end());
      rep.trace("richardson_orders", orders);
      rep.check("sweep.gap_order", worst >= 1.0, worst, 1.0,
                "the pairing identity gap converges at first order or better");
    }
  }
  if (cfg.sweep_param == "R_max" && h1s.size() >= 2) {
    const std::size_t k = h1s.size() - 1;
    const double dh = std::fabs(h1s[k] - h1s[k - 1]) / std::fabs(h1s[k]);
    const double dp = std::fabs(pairings[k] - pairings[k - 1]) / std::fabs(pairings[k]);
    const double dv = std::fabs(vorts[k] - vorts[k - 1]) / std::fabs(vorts[k]);
    rep.check("sweep.truncation_h1", dh <= 0.01, dh, 0.01,
              "H1 norm stable under pushing the truncation outward");
    rep.check("sweep.truncation_pairing", dp <= 0.01, dp, 0.01,
              "pairing stable under pushing the truncation outward");
    rep.check("sweep.truncation_vorticity", dv <= 0.01, dv, 0.01,
              "vorticity stable under pushing the truncation outward");
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::string* report_out) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  Report rep(config_echo(cfg));
  try {
    switch (cfg.mode) {
      case RunMode::stokes: run_stokes(cfg, rep); break;
      case RunMode::verify: run_verify(cfg, rep); break;
      case RunMode::ns: run_ns(cfg, rep); break;
      case RunMode::sweep: run_sweep(cfg, rep); break;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    std::filesystem::create_directories(cfg.out_dir);
    rep.write(cfg.out_dir + "/report.json");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (report_out != nullptr) *report_out = rep.to_json();
  return rep.all_passed() ? 0 : 1;
}

int run(const RunConfig& cfg) { return run(cfg, nullptr); }

}  // namespace hyperstokes
