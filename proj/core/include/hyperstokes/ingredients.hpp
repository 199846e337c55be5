// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_INGREDIENTS_HPP
#define HYPERSTOKES_INGREDIENTS_HPP

#include "hyperstokes/calculus.hpp"
#include "hyperstokes/field.hpp"

namespace hyperstokes {

// The explicit square-integrable harmonic potential family
//   F = c Re( e^{i phase} z^n ),  n >= 1,
// in disk coordinates.  Its conjugate G = c Im( e^{i phase} z^n ) generates
// the exactly divergence-compatible face representation of dF.
struct HarmonicSpec {
  int n = 1;
  double c = 1.0;
  double phase = 0.0;

  HarmonicSpec() = default;
  HarmonicSpec(int n_, double c_, double phase_ = 0.0);
};

// Discrete realizations of one harmonic pair on a grid.  Three faces of the
// same object serve three different exact identities:
//   F            cell samples of the potential,
//   dF           analytic derivatives sampled at the faces (best pointwise
//                accuracy; used by norm oracles),
//   dF_flux      face averages obtained by differencing the conjugate
//                potential at vertices; its staggered divergence telescopes
//                to rounding, which the construction of the divergence data
//                and of the divergence-free background relies on.
// The discrete gradient of F (ext_derivative) is the third representation;
// it makes pairings against divergence-free fields vanish exactly.
struct HarmonicField {
  HarmonicSpec spec;
  ScalarField F;
  OneFormField dF;
  OneFormField dF_flux;
  double l2_sq_global = 0.0;  // || dF ||^2 over the whole plane: pi n c^2
  WallTangential walls;       // analytic tangential trace of dF

  double value(double r, double theta) const;       // F
  double conjugate(double r, double theta) const;   // G
  double radial_deriv(double r, double theta) const;
  double angular_deriv(double r, double theta) const;  // (1/r) dF/dtheta
};

HarmonicField harmonic_pair(const HarmonicSpec& spec, const AnnulusGrid& grid);

// Radial cutoff eta_{R0}(x) = eta(rho(x) / (2 R0)) with eta == 1 on [0,1],
// == 0 on [2, inf), nonincreasing.  The transition profile is either the
// C-infinity exponential partition s(2-t)/(s(2-t)+s(t-1)), s(t)=exp(-1/t),
// or a C^2 quintic smoothstep.
enum class CutoffProfile { smooth_exponential, quintic_c2 };

struct CutoffSpec {
  double a = 1.0;
  double R0 = 1.0;
  CutoffProfile profile = CutoffProfile::smooth_exponential;

  CutoffSpec() = default;
  CutoffSpec(double a_, double R0_,
             CutoffProfile p = CutoffProfile::smooth_exponential);

  double eta_of_t(double t) const;        // profile on [0, inf)
  double eta_prime_of_t(double t) const;  // <= 0
  double eta_at_rho(double rho) const { return eta_of_t(rho / (2.0 * R0)); }
};

struct CutoffField {
  CutoffSpec spec;
  ScalarField eta;                 // cell samples
  std::vector<double> eta_node;    // at node radii (r-faces), size n_r+1
  std::vector<double> eta_cellr;   // at cell radii (th-faces), size n_r
  OneFormField deta;               // analytic gradient 1-form (radial)
};

/// Requires the grid to reach geodesic radius 4 R0.
CutoffField cutoff(const CutoffSpec& spec, const AnnulusGrid& grid);

// The divergence data h with div w = h, realized as the staggered divergence
// of -(eta - 1) dF_flux.  It vanishes identically outside the transition
// ring, and its integral telescopes to wall fluxes that cancel to rounding.
ScalarField divergence_rhs(const CutoffField& eta, const HarmonicField& F,
                           const AnnulusGrid& grid);

/// The Euclidean integral of h; the solvability condition of the divergence
/// problem requires it to vanish.
double compatibility(const ScalarField& h);

/// g(d eta, dF) as a cell field: the hyperbolic form of -h.
ScalarField hyperbolic_rhs(const ScalarField& h);

}  // namespace hyperstokes

#endif
