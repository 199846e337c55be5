// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/probes.hpp"

#include <cmath>
#include <numbers>

#include "hyperstokes/calculus.hpp"

namespace hyperstokes {

namespace {
// C^1 bump on [0,1]: s^2 (1-s)^2 scaled to peak 1
double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double b = s * (1.0 - s);
  return 16.0 * b * b;
}

struct RadialShape {
  double t0, t1;
  int k;  // radial oscillation
  double operator()(double t) const {
    const double s = (t - t0) / (t1 - t0);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return bump(s) * std::sin(k * std::numbers::pi * s);
  }
};
}  // namespace

VertexField random_stream(const AnnulusGrid& g, std::mt19937_64& rng, int max_mode) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> kdist(1, 3);
  VertexField psi(g);
  const double t0 = g.t_node.front(), t1 = g.t_node.back();
  for (int m = 0; m <= max_mode; ++m) {
    const double ac = amp(rng), as = amp(rng);
    const RadialShape shape{t0, t1, kdist(rng)};
    for (int i = 0; i <= g.n_r; ++i) {
      const double radial = shape(g.t_node[i]);
      if (radial == 0.0) continue;
      for (int j = 0; j < g.n_th; ++j) {
        psi.at(i, j) += radial * (ac * std::cos(m * g.theta_node[j]) +
                                  as * std::sin(m * g.theta_node[j]));
      }
    }
  }
  return psi;
}

OneFormField random_divfree(const AnnulusGrid& g, std::mt19937_64& rng, int max_mode) {
  const VertexField psi = random_stream(g, rng, max_mode);
  return stream_to_oneform(psi);
}

OneFormField random_zero_boundary(const AnnulusGrid& g, std::mt19937_64& rng,
                                  int max_mode) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> kdist(1, 3);
  OneFormField u(g, BoundaryClass::zero_both);
  const double t0 = g.t_node.front(), t1 = g.t_node.back();
  for (int m = 0; m <= max_mode; ++m) {
    const double arc = amp(rng), ars = amp(rng);
    const double atc = amp(rng), ats = amp(rng);
    const RadialShape sr{t0, t1, kdist(rng)};
    const RadialShape st{t0, t1, kdist(rng)};
    for (int i = 1; i < g.n_r; ++i) {
      const double radial = sr(g.t_node[i]);
      if (radial == 0.0) continue;
      for (int j = 0; j < g.n_th; ++j) {
        u.r_at(i, j) += radial * (arc * std::cos(m * g.theta_cell[j]) +
                                  ars * std::sin(m * g.theta_cell[j]));
      }
    }
    for (int i = 0; i < g.n_r; ++i) {
      const double radial = st(g.t_node[i] + 0.5 * (t1 - t0) / g.n_r);
      if (radial == 0.0) continue;
      for (int j = 0; j < g.n_th; ++j) {
        u.th_at(i, j) += radial * (atc * std::cos(m * g.theta_node[j]) +
                                   ats * std::sin(m * g.theta_node[j]));
      }
    }
  }
  return u;
}

}  // namespace hyperstokes
