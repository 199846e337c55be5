#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperstokes/probes.hpp"
#include "hyperstokes/stokes.hpp"

using namespace hyperstokes;

namespace {
// fields reference the caller-owned grid, so the grid must outlive them
struct Pipeline {
  AnnulusGrid grid;
  StokesSolution sol;
  Pipeline(int n_r, int n_th, double R_out = 9.0, int n = 1)
      : grid(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, R_out, n_r, n_th)) {
    sol = solve_stokes_pipeline(grid, HarmonicSpec(n, 1.0));
  }
};
}  // namespace

TEST_CASE("zero forcing gives the zero solution and a constant multiplier") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 48, 64);
  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(1.0));
  StokesSolveReport rep;
  auto [wt, P] = solve_stokes(solver, WeakFunctional(g), &rep);
  CHECK(max_abs(wt.ur) == 0.0);
  CHECK(max_abs(wt.uth) == 0.0);
  // normalized to zero mean on the innermost annulus
  CHECK(max_abs(P.v) <= 1e-14);
  CHECK(rep.momentum_residual == 0.0);
}

TEST_CASE("standard solve: residuals at solver tolerance") {
  const Pipeline p(128, 192);
  const StokesSolution& sol = p.sol;
  CHECK(sol.stokes_report.rhs_dual_norm > 0.0);
  CHECK(sol.stokes_report.momentum_residual_rel <= 1e-8);
  CHECK(sol.stokes_report.momentum_residual_rel <= 1e-10);  // direct solve
  CHECK(sol.stokes_report.div_residual_rel <= 1e-8);
  const double en = energy_inner(sol.w_tilde, sol.w_tilde);
  CHECK(en > 0.0);
}

TEST_CASE("energy symmetry against random divergence-free probes") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 96, 128);
  const StokesSolution sol = solve_stokes_pipeline(g, HarmonicSpec(1, 1.0));
  std::mt19937_64 rng(23);
  const double tnorm = sol.stokes_report.rhs_dual_norm;
  for (int k = 0; k < 20; ++k) {
    const OneFormField phi = random_divfree(g, rng);
    const double lhs = energy_inner(sol.w_tilde, phi);
    const double rhs = sol.T.act(phi);
    const double scale = tnorm * std::sqrt(energy_inner(phi, phi));
    CHECK(std::fabs(lhs - rhs) <= 1e-8 * scale);
  }
}

TEST_CASE("assembled solution: array identity and boundary trace") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 96, 128);
  const CutoffField eta = cutoff(CutoffSpec(1.0, 1.0), g);
  const HarmonicField F = harmonic_pair(HarmonicSpec(1, 1.0), g);
  const ScalarField h = divergence_rhs(eta, F, g);
  auto [w, divrep] = solve_divergence(g, h);
  const WeakFunctional T = stokes_rhs(eta, F, w, g);
  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(1.0));
  auto [wt, P] = solve_stokes(solver, T);
  const OneFormField u = assemble_solution(eta, F, w, wt);

  // u = (eta - 1) dF + w + w~ slot by slot
  for (int i = 0; i <= g.n_r; i += 13) {
    for (int j = 0; j < g.n_th; j += 17) {
      const double expect = (eta.eta_node[i] - 1.0) * F.dF_flux.r_at(i, j) +
                            w.r_at(i, j) + wt.r_at(i, j);
      CHECK(u.r_at(i, j) == expect);
    }
  }
  // zero inner trace exactly: eta == 1 there and both correctors vanish
  for (int j = 0; j < g.n_th; ++j) {
    CHECK(u.ur[g.ridx(0, j)] == 0.0);
  }
  // on the plateau rho <= 2 R0 the cutoff part drops out: u = w + w~
  const int i_plateau = g.lower_cell(1.5);
  for (int j = 0; j < g.n_th; j += 11) {
    CHECK(u.th_at(i_plateau, j) ==
          doctest::Approx(w.th_at(i_plateau, j) + wt.th_at(i_plateau, j))
              .epsilon(1e-15));
  }
  // all ingredients zero -> zero solution
  OneFormField z(g);
  CutoffField eta1 = eta;
  // eta == 1 everywhere makes (eta - 1) dF vanish
  eta1.eta_node.assign(g.n_r + 1, 1.0);
  eta1.eta_cellr.assign(g.n_r, 1.0);
  const OneFormField u0 = assemble_solution(eta1, F, z, z);
  CHECK(max_abs(u0.ur) == 0.0);
  CHECK(max_abs(u0.uth) == 0.0);
}

TEST_CASE("manufactured pair (dF, -2a^2 F) has second-order weak residual") {
  // (v, P) = (dF, -2 a^2 F) solves the system exactly in the continuum; the
  // discrete residual of that pair converges at second order
  auto residual = [](int n_r, int n_th) {
    const AnnulusGrid g =
        build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, n_r, n_th);
    const HarmonicField F = harmonic_pair(HarmonicSpec(1, 1.0), g);
    SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(1.0));
    ScalarField P(g);
    for (int i = 0; i < g.n_r; ++i) {
      for (int j = 0; j < g.n_th; ++j) P.at(i, j) = -2.0 * F.F.at(i, j);
    }
    // residual functional: -K dF - B^H P acting on divergence-free fields
    WeakFunctional r(g);
    r.axpy(-1.0, operator_apply(F.dF_flux, OperatorKind::hyperbolic_energy(1.0),
                                &F.walls));
    r.axpy(-1.0, pressure_gradient_dual(P));
    for (int j = 0; j < g.n_th; ++j) {
      r.fur[g.ridx(0, j)] = 0.0;
      r.fur[g.ridx(g.n_r, j)] = 0.0;
    }
    return solver.dual_norm(r) / std::sqrt(F.l2_sq_global);
  };
  const double r1 = residual(48, 96);
  const double r2 = residual(96, 192);
  CHECK(r2 < r1);
  CHECK(std::log2(r1 / r2) > 1.5);
}

TEST_CASE("re-solving is deterministic") {
  const Pipeline pa(64, 96), pb(64, 96);
  const StokesSolution& a = pa.sol;
  const StokesSolution& b = pb.sol;
  double diff = 0.0;
  for (std::size_t k = 0; k < a.w_tilde.ur.size(); ++k) {
    diff = std::max(diff, std::fabs(a.w_tilde.ur[k] - b.w_tilde.ur[k]));
  }
  CHECK(diff == 0.0);
}

TEST_CASE("pressure normalization: zero mean on the innermost annulus") {
  const Pipeline p(96, 128);
  const StokesSolution& sol = p.sol;
  CHECK(std::fabs(pressure_mean(sol.P, 6.0)) <= 1e-12 * (1.0 + max_abs(sol.P.v)));
  // p = P + 2 a^2 F as an array identity
  const AnnulusGrid& g = *sol.P.grid;
  const HarmonicField F = harmonic_pair(HarmonicSpec(1, 1.0), g);
  for (int i = 0; i < g.n_r; i += 19) {
    for (int j = 0; j < g.n_th; j += 23) {
      CHECK(sol.p_full.at(i, j) ==
            doctest::Approx(sol.P.at(i, j) + 2.0 * F.F.at(i, j)).epsilon(1e-13));
    }
  }
}

TEST_CASE("pressure gluing: constant shifts and overlap checks") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 48, 64);
  ScalarField base(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      base.at(i, j) = std::cos(g.theta_cell[j]) * g.t_node[i];
    }
  }
  // single local: returned minus its inner mean
  {
    std::vector<PressureLocal> locals;
    locals.push_back({g.n_r, base});
    auto [glued, rep] = glue_pressure(locals);
    CHECK(rep.overlap_gaps.empty());
    CHECK(rep.max_gap == 0.0);
  }
  // two locals differing by a constant: glued with zero residual
  {
    ScalarField shifted = base;
    for (auto& x : shifted.v) x += 3.7;
    std::vector<PressureLocal> locals;
    locals.push_back({g.n_r / 2, base});
    locals.push_back({g.n_r, shifted});
    auto [glued, rep] = glue_pressure(locals);
    CHECK(rep.max_gap <= 1e-12);
    CHECK(rep.shifts[1] - rep.shifts[0] == doctest::Approx(3.7).epsilon(1e-12));
  }
  // inconsistent locals are rejected
  {
    ScalarField broken = base;
    for (int j = 0; j < g.n_th; ++j) broken.at(2, j) += std::sin(j * 0.5);
    std::vector<PressureLocal> locals;
    locals.push_back({g.n_r / 2, base});
    locals.push_back({g.n_r, broken});
    CHECK_THROWS_AS(glue_pressure(locals), std::runtime_error);
  }
}

TEST_CASE("locally recovered pressures glue against the multiplier") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 96, 128);
  const CutoffField eta = cutoff(CutoffSpec(1.0, 1.0), g);
  const HarmonicField F = harmonic_pair(HarmonicSpec(1, 1.0), g);
  const ScalarField h = divergence_rhs(eta, F, g);
  auto [w, divrep] = solve_divergence(g, h);
  const WeakFunctional T = stokes_rhs(eta, F, w, g);
  SpectralSaddleSolver solver(g, OperatorKind::hyperbolic_energy(1.0));
  auto [wt, P] = solve_stokes(solver, T);

  // momentum dual l = K w~ - T = -B^H P at the discrete solution
  WeakFunctional l = operator_apply(wt, OperatorKind::hyperbolic_energy(1.0));
  l.axpy(-1.0, T);
  l.scale(-1.0);
  for (int j = 0; j < g.n_th; ++j) {
    l.fur[g.ridx(0, j)] = 0.0;
    l.fur[g.ridx(g.n_r, j)] = 0.0;
  }
  std::vector<PressureLocal> locals;
  locals.push_back({g.lower_cell(6.0), recover_pressure_local(g, g.lower_cell(6.0), l)});
  locals.push_back({g.lower_cell(8.0), recover_pressure_local(g, g.lower_cell(8.0), l)});
  locals.push_back({g.n_r, P});
  auto [glued, rep] = glue_pressure(locals);
  CHECK(rep.max_gap <= 1e-8);
}
