// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/ingredients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperstokes {

HarmonicSpec::HarmonicSpec(int n_, double c_, double phase_)
    : n(n_), c(c_), phase(phase_) {
  if (n < 1) throw std::invalid_argument("harmonic mode n must be >= 1");
  if (c == 0.0 || !std::isfinite(c)) {
    throw std::invalid_argument("harmonic amplitude c must be nonzero");
  }
  if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
}

double HarmonicField::value(double r, double theta) const {
  return spec.c * std::pow(r, spec.n) * std::cos(spec.n * theta + spec.phase);
}

double HarmonicField::conjugate(double r, double theta) const {
  return spec.c * std::pow(r, spec.n) * std::sin(spec.n * theta + spec.phase);
}

double HarmonicField::radial_deriv(double r, double theta) const {
  return spec.c * spec.n * std::pow(r, spec.n - 1) *
         std::cos(spec.n * theta + spec.phase);
}

double HarmonicField::angular_deriv(double r, double theta) const {
  return -spec.c * spec.n * std::pow(r, spec.n - 1) *
         std::sin(spec.n * theta + spec.phase);
}

HarmonicField harmonic_pair(const HarmonicSpec& spec, const AnnulusGrid& g) {
  HarmonicField out;
  out.spec = spec;
  out.F = ScalarField(g);
  out.dF = OneFormField(g);
  out.dF_flux = OneFormField(g);
  out.l2_sq_global = std::numbers::pi * spec.n * spec.c * spec.c;

  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      out.F.at(i, j) = out.value(g.r_cell_v(i), g.theta_cell[j]);
    }
  }
  for (int i = 0; i <= g.n_r; ++i) {
    const double r = g.r_node_v(i);
    for (int j = 0; j < g.n_th; ++j) {
      out.dF.r_at(i, j) = out.radial_deriv(r, g.theta_cell[j]);
      out.dF_flux.r_at(i, j) = (out.conjugate(r, g.theta_node[g.jnext(j)]) -
                                out.conjugate(r, g.theta_node[j])) /
                               (r * g.dtheta);
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_cell_v(i);
    for (int j = 0; j < g.n_th; ++j) {
      out.dF.th_at(i, j) = out.angular_deriv(r, g.theta_node[j]);
      out.dF_flux.th_at(i, j) = -(out.conjugate(g.r_node_v(i + 1), g.theta_node[j]) -
                                  out.conjugate(g.r_node_v(i), g.theta_node[j])) /
                                g.dr[i];
    }
  }
  out.walls.inner.resize(g.n_th);
  out.walls.outer.resize(g.n_th);
  for (int j = 0; j < g.n_th; ++j) {
    out.walls.inner[j] = out.angular_deriv(g.r_node_v(0), g.theta_node[j]);
    out.walls.outer[j] = out.angular_deriv(g.r_node_v(g.n_r), g.theta_node[j]);
  }
  return out;
}

CutoffSpec::CutoffSpec(double a_, double R0_, CutoffProfile p)
    : a(a_), R0(R0_), profile(p) {
  if (!(a > 0.0) || !(R0 > 0.0)) {
    throw std::invalid_argument("cutoff requires a > 0 and R0 > 0");
  }
}

namespace {
double part(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double part_prime(double t) {
  return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}
}  // namespace

double CutoffSpec::eta_of_t(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  if (profile == CutoffProfile::smooth_exponential) {
    const double hi = part(2.0 - t), lo = part(t - 1.0);
    return hi / (hi + lo);
  }
  const double x = t - 1.0;
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double CutoffSpec::eta_prime_of_t(double t) const {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  if (profile == CutoffProfile::smooth_exponential) {
    const double hi = part(2.0 - t), lo = part(t - 1.0);
    const double d = hi + lo;
    return (-part_prime(2.0 - t) * lo - hi * part_prime(t - 1.0)) / (d * d);
  }
  const double x = t - 1.0;
  return -30.0 * x * x * (1.0 + x * (-2.0 + x));
}

CutoffField cutoff(const CutoffSpec& spec, const AnnulusGrid& g) {
  if (spec.a != g.spec.a || spec.R0 != g.spec.R0) {
    throw std::invalid_argument("cutoff spec does not match the grid's domain");
  }
  if (g.R_out < 4.0 * spec.R0) {
    throw std::invalid_argument(
        "grid outer radius below 4 R0: the cutoff support is not covered");
  }
  CutoffField out;
  out.spec = spec;
  out.eta = ScalarField(g);
  out.eta_node.resize(g.n_r + 1);
  out.eta_cellr.resize(g.n_r);
  out.deta = OneFormField(g);

  for (int i = 0; i <= g.n_r; ++i) out.eta_node[i] = spec.eta_at_rho(g.rho_node[i]);
  for (int i = 0; i < g.n_r; ++i) {
    out.eta_cellr[i] = spec.eta_at_rho(g.rho_cell[i]);
    for (int j = 0; j < g.n_th; ++j) out.eta.at(i, j) = out.eta_cellr[i];
  }
  // d eta = eta'(rho/2R0) / (2 R0) * (d rho / d r) dr, purely radial
  for (int i = 0; i <= g.n_r; ++i) {
    const double drho_dr = 2.0 / (spec.a * g.rad_node[i].one_minus_sq());
    const double v = spec.eta_prime_of_t(g.rho_node[i] / (2.0 * spec.R0)) /
                     (2.0 * spec.R0) * drho_dr;
    for (int j = 0; j < g.n_th; ++j) out.deta.r_at(i, j) = v;
  }
  return out;
}

ScalarField divergence_rhs(const CutoffField& eta, const HarmonicField& F,
                           const AnnulusGrid& g) {
  if (eta.eta.grid != &g || F.F.grid != &g) {
    throw std::invalid_argument("ingredients live on a different grid");
  }
  OneFormField masked(g);
  for (int i = 0; i <= g.n_r; ++i) {
    const double w = eta.eta_node[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      masked.r_at(i, j) = w * F.dF_flux.r_at(i, j);
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double w = eta.eta_cellr[i] - 1.0;
    for (int j = 0; j < g.n_th; ++j) {
      masked.th_at(i, j) = w * F.dF_flux.th_at(i, j);
    }
  }
  ScalarField h = divergence_euclid(masked);
  for (auto& x : h.v) x = -x;
  return h;
}

double compatibility(const ScalarField& h) {
  return integrate(h, Measure::euclidean);
}

ScalarField hyperbolic_rhs(const ScalarField& h) {
  const AnnulusGrid& g = *h.grid;
  ScalarField out(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      out.at(i, j) = -g.W_cell[i] * h.at(i, j);
    }
  }
  return out;
}

}  // namespace hyperstokes
