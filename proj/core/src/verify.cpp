// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/verify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyperstokes/probes.hpp"

namespace hyperstokes {

namespace {
// int_{|y|<s} |grad F|^2 dy for F = c Re(e^{i phase} z^n): pi n c^2 s^{2n}
double disk_energy(const HarmonicSpec& hs, double s) {
  return std::numbers::pi * hs.n * hs.c * hs.c * std::pow(s, 2 * hs.n);
}

// radial quadrature of rho-weighted |dF|^2 over the grid with cell weights
double weighted_dF_energy(const AnnulusGrid& g, const HarmonicSpec& hs,
                          const std::vector<double>& radial_weight) {
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_cell_v(i);
    const double dens = hs.n * hs.n * hs.c * hs.c * std::pow(r, 2 * hs.n - 2);
    s += radial_weight[i] * dens * g.cell_area[i] * g.n_th;
  }
  return s;
}
}  // namespace

NontrivialityReport nontriviality(const OneFormField& w, const HarmonicField& F,
                                  const CutoffField& eta, const OneFormField& u) {
  const AnnulusGrid& g = *w.grid;
  NontrivialityReport rep;
  rep.pairing = l2_inner(w, F.dF_flux);

  // eta == 1 on the obstacle disk: that part of the energy is analytic
  std::vector<double> wgt(g.n_r);
  for (int i = 0; i < g.n_r; ++i) wgt[i] = eta.eta_cellr[i];
  rep.eta_energy =
      disk_energy(F.spec, g.rad_node[0].r) + weighted_dF_energy(g, F.spec, wgt);

  rep.gap = std::fabs(rep.pairing + rep.eta_energy);
  rep.gap_rel = rep.gap / rep.eta_energy;
  rep.sign_ok = rep.pairing < 0.0;
  rep.u_h1_norm = std::sqrt(h1_grad_sq(u) + l2_inner(u, u));
  return rep;
}

NonzeroCertificate nonzero_solution(const OneFormField& u, const HarmonicField& F,
                                    const CutoffField& eta,
                                    const OneFormField& w_tilde) {
  const AnnulusGrid& g = *u.grid;
  NonzeroCertificate cert;
  cert.h1_norm = std::sqrt(h1_grad_sq(u) + l2_inner(u, u));

  std::vector<double> wgt(g.n_r);
  for (int i = 0; i < g.n_r; ++i) wgt[i] = 1.0 - eta.eta_cellr[i];
  // the tail beyond the truncation has eta == 0 and integrates analytically
  cert.certificate = weighted_dF_energy(g, F.spec, wgt) +
                     (disk_energy(F.spec, 1.0) -
                      disk_energy(F.spec, g.rad_node[g.n_r].r));

  const OneFormField dF_grad = ext_derivative(F.F);
  cert.wtilde_dF_pairing = l2_inner(w_tilde, dF_grad);
  const double denom =
      std::sqrt(l2_inner(w_tilde, w_tilde)) * std::sqrt(l2_inner(dF_grad, dF_grad));
  cert.wtilde_dF_rel =
      denom > 0.0 ? std::fabs(cert.wtilde_dF_pairing) / denom : 0.0;
  cert.nonzero = cert.h1_norm > 0.0 && cert.certificate > 0.0;
  return cert;
}

// --- potential flow ------------------------------------------------------------

namespace {
// flux-form gradient field of one harmonic potential on the annulus
struct HarmonicMode {
  int k = 0;          // angular mode; 0 with log_radial/circulation flags
  bool imag = false;  // Im z^k instead of Re z^k
  bool log_radial = false;
  bool circulation = false;

  // conjugate potential at a vertex (generates the flux form)
  double conj(double r, double th) const {
    if (log_radial) return th;          // d log r
    if (circulation) return -std::log(r);  // d theta
    const double p = std::pow(r, k);
    return imag ? -p * std::cos(k * th) : p * std::sin(k * th);
  }
};

OneFormField mode_field(const AnnulusGrid& g, const HarmonicMode& m) {
  OneFormField u(g);
  if (m.log_radial) {
    for (int i = 0; i <= g.n_r; ++i) {
      for (int j = 0; j < g.n_th; ++j) u.r_at(i, j) = 1.0 / g.r_node_v(i);
    }
    return u;
  }
  if (m.circulation) {
    for (int i = 0; i < g.n_r; ++i) {
      const double v = (g.t_node[i + 1] - g.t_node[i]) / g.dr[i];
      for (int j = 0; j < g.n_th; ++j) u.th_at(i, j) = v;
    }
    return u;
  }
  VertexField psi(g);
  for (int i = 0; i <= g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      psi.at(i, j) = m.conj(g.r_node_v(i), g.theta_node[j]);
    }
  }
  OneFormField f = stream_to_oneform(psi);
  f.bc = BoundaryClass::free_field;
  return f;
}

// dense SPD solve, scaled Cholesky
std::vector<double> solve_spd(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = 1.0 / std::sqrt(std::max(A[i * n + i], 1e-300));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i * n + j] *= d[i] * d[j];
    A[i * n + i] += 1e-13;
    b[i] *= d[i];
  }
  // Cholesky in place
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = A[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("potential-fit Gram not SPD");
        A[i * n + i] = std::sqrt(s);
      } else {
        A[i * n + j] = s / A[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
    b[i] = s / A[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= A[k * n + ii] * b[k];
    b[ii] = s / A[ii * n + ii];
  }
  for (std::size_t i = 0; i < n; ++i) b[i] *= d[i];
  return b;
}
}  // namespace

PotentialFlowReport potential_flow_test(const OneFormField& u,
                                        const WallTangential* walls, int max_mode) {
  const AnnulusGrid& g = *u.grid;
  PotentialFlowReport rep;
  const double u_l2 = std::sqrt(l2_inner(u, u));
  if (u_l2 == 0.0) {
    rep.degenerate = true;
    return rep;
  }
  rep.vorticity_l2 = std::sqrt(vorticity_l2_sq(u, Measure::hyperbolic, walls));
  rep.vorticity_rel = rep.vorticity_l2 / u_l2;

  std::vector<HarmonicMode> modes;
  for (int k = -max_mode; k <= max_mode; ++k) {
    if (k == 0) continue;
    modes.push_back({k, false, false, false});
    modes.push_back({k, true, false, false});
  }
  modes.push_back({0, false, true, false});
  modes.push_back({0, false, false, true});

  std::vector<OneFormField> basis;
  basis.reserve(modes.size());
  for (const auto& m : modes) basis.push_back(mode_field(g, m));

  const std::size_t n = basis.size();
  std::vector<double> G(n * n, 0.0), rhs(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    rhs[a] = l2_inner(basis[a], u);
    for (std::size_t b = a; b < n; ++b) {
      G[a * n + b] = G[b * n + a] = l2_inner(basis[a], basis[b]);
    }
  }
  const std::vector<double> x = solve_spd(G, rhs);
  double fit_sq = 0.0;
  for (std::size_t a = 0; a < n; ++a) fit_sq += rhs[a] * x[a];
  rep.best_potential_residual =
      std::sqrt(std::max(0.0, u_l2 * u_l2 - fit_sq)) / u_l2;

  // Laurent coefficients of the fitted potential's complex derivative,
  // sampled by a trapezoid contour integral at three interior radii
  rep.probe_radii = {g.r_cell_v(g.n_r / 4), g.r_cell_v(g.n_r / 2),
                     g.r_cell_v((3 * g.n_r) / 4)};
  const double delta = rep.probe_radii[1];
  const int kmax = max_mode;
  rep.laurent_coeffs.assign(2 * kmax + 1, {0.0, 0.0});
  for (int mcoef = -kmax; mcoef <= kmax; ++mcoef) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < g.n_th; ++j) {
      const double th = g.theta_node[j];
      std::complex<double> W(0.0, 0.0);  // complex derivative of the fit
      const std::complex<double> z = std::polar(delta, th);
      for (std::size_t a = 0; a < n; ++a) {
        const auto& m = modes[a];
        if (m.log_radial) {
          W += x[a] / z;
        } else if (m.circulation) {
          W += std::complex<double>(0.0, -x[a]) / z;
        } else {
          const std::complex<double> coef =
              m.imag ? std::complex<double>(0.0, -x[a])
                     : std::complex<double>(x[a], 0.0);
          W += coef * double(m.k) * std::pow(z, m.k - 1);
        }
      }
      acc += W * std::exp(std::complex<double>(0.0, -mcoef * th));
    }
    acc /= double(g.n_th);
    rep.laurent_coeffs[mcoef + kmax] = acc * std::pow(delta, -mcoef);
  }
  return rep;
}

InequalityReport inequality_suite(const AnnulusGrid& g, std::uint64_t seed,
                                  int count, double tol) {
  InequalityReport rep;
  rep.samples = count;
  rep.seed = seed;
  rep.poincare_tol = tol;
  const double a = g.spec.a;
  std::mt19937_64 rng(seed);
  bool all_finite = true;
  for (int s = 0; s < count; ++s) {
    const OneFormField phi =
        (s % 2 == 0) ? random_zero_boundary(g, rng) : random_divfree(g, rng);
    const FieldNorms n = norms(phi);
    const double grad = std::sqrt(h1_grad_sq(phi));
    if (n.l2 == 0.0 || grad == 0.0) continue;  // guard: zero probes carry no quotient
    const double q = a * n.l2 / grad;
    rep.poincare_worst = std::max(rep.poincare_worst, q);
    if (q <= 1.0 + tol) ++rep.poincare_pass;
    const double lady = n.l4 / std::sqrt(n.l2 * (n.l2 + grad));
    if (!std::isfinite(lady)) all_finite = false;
    rep.ladyzhenskaya_max = std::max(rep.ladyzhenskaya_max, lady);
  }
  rep.ladyzhenskaya_finite = all_finite && std::isfinite(rep.ladyzhenskaya_max);
  for (int nn = 1; nn <= 4; ++nn) {
    const HarmonicField F = harmonic_pair(HarmonicSpec(nn, 1.0), g);
    rep.harmonic_quotients.push_back(std::sqrt(h1_grad_sq(F.dF)) /
                                     std::sqrt(l2_inner(F.dF, F.dF)));
  }
  return rep;
}

}  // namespace hyperstokes
