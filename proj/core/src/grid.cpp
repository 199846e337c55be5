// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperstokes {

namespace {
constexpr std::size_t kCellGuard = std::size_t(4096) * 4096;

AnnulusGrid build_from_nodes(const DomainSpec& spec, std::vector<double> t_nodes,
                             int n_th) {
  const int n_r = static_cast<int>(t_nodes.size()) - 1;
  AnnulusGrid g{spec, DiskChart(spec.a)};
  g.n_r = n_r;
  g.n_th = n_th;
  g.t_node = std::move(t_nodes);

  g.rad_node.resize(n_r + 1);
  g.rad_cell.resize(n_r);
  g.rho_node.resize(n_r + 1);
  g.rho_cell.resize(n_r);
  for (int i = 0; i <= n_r; ++i) {
    g.rad_node[i] = DiskRadius::from_log(g.t_node[i]);
    g.rho_node[i] = disk_to_geodesic(spec.a, g.rad_node[i]);
  }
  for (int i = 0; i < n_r; ++i) {
    g.rad_cell[i] = DiskRadius::from_log(0.5 * (g.t_node[i] + g.t_node[i + 1]));
    g.rho_cell[i] = disk_to_geodesic(spec.a, g.rad_cell[i]);
  }
  g.R_in = g.rho_node.front();
  g.R_out = g.rho_node.back();

  g.dtheta = 2.0 * std::numbers::pi / n_th;
  g.theta_node.resize(n_th);
  g.theta_cell.resize(n_th);
  g.cos_node.resize(n_th);
  g.sin_node.resize(n_th);
  g.cos_cell.resize(n_th);
  g.sin_cell.resize(n_th);
  for (int j = 0; j < n_th; ++j) {
    g.theta_node[j] = g.dtheta * j;
    g.theta_cell[j] = g.dtheta * (j + 0.5);
    g.cos_node[j] = std::cos(g.theta_node[j]);
    g.sin_node[j] = std::sin(g.theta_node[j]);
    g.cos_cell[j] = std::cos(g.theta_cell[j]);
    g.sin_cell[j] = std::sin(g.theta_cell[j]);
  }

  g.dr.resize(n_r);
  g.dr_vertex.resize(n_r + 1);
  for (int i = 0; i < n_r; ++i) g.dr[i] = g.rad_node[i + 1].r - g.rad_node[i].r;
  g.dr_vertex[0] = g.rad_cell[0].r - g.rad_node[0].r;
  for (int i = 1; i < n_r; ++i) {
    g.dr_vertex[i] = g.rad_cell[i].r - g.rad_cell[i - 1].r;
  }
  g.dr_vertex[n_r] = g.rad_node[n_r].r - g.rad_cell[n_r - 1].r;

  auto ring = [&](double r_lo, double r_hi) {
    return 0.5 * (r_hi * r_hi - r_lo * r_lo) * g.dtheta;
  };
  g.cell_area.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    g.cell_area[i] = ring(g.rad_node[i].r, g.rad_node[i + 1].r);
  }
  g.rface_area.resize(n_r + 1);
  g.rface_area[0] = ring(g.rad_node[0].r, g.rad_cell[0].r);
  for (int i = 1; i < n_r; ++i) {
    g.rface_area[i] = ring(g.rad_cell[i - 1].r, g.rad_cell[i].r);
  }
  g.rface_area[n_r] = ring(g.rad_cell[n_r - 1].r, g.rad_node[n_r].r);
  g.vertex_area = g.rface_area;

  g.W_node.resize(n_r + 1);
  g.W_cell.resize(n_r);
  for (int i = 0; i <= n_r; ++i) {
    g.W_node[i] = g.chart.weights(g.rad_node[i]).pairing;
  }
  for (int i = 0; i < n_r; ++i) {
    g.W_cell[i] = g.chart.weights(g.rad_cell[i]).pairing;
  }

  g.aspect_ratio = (g.t_node[1] - g.t_node[0]) / g.dtheta;
  return g;
}

void check_counts(int n_r, int n_th) {
  if (n_r < 8) throw std::invalid_argument("n_r must be >= 8");
  if (n_th < 16 || n_th % 2 != 0) {
    throw std::invalid_argument("n_th must be even and >= 16");
  }
  if (static_cast<std::size_t>(n_r) * n_th > kCellGuard) {
    throw std::invalid_argument("grid exceeds the 4096^2 cell guard");
  }
}

void check_band_resolution(const AnnulusGrid& g) {
  // the cutoff transition lives in geodesic [2 R0, 4 R0]; when the domain
  // contains it, it must be resolved
  const DomainSpec& spec = g.spec;
  if (g.R_in <= 2.0 * spec.R0 && g.R_out >= 4.0 * spec.R0) {
    int band = 0;
    for (int i = 0; i < g.n_r; ++i) {
      if (g.rho_cell[i] > 2.0 * spec.R0 && g.rho_cell[i] < 4.0 * spec.R0) ++band;
    }
    if (band < 8) {
      throw std::invalid_argument(
          "under-resolved cutoff transition: only " + std::to_string(band) +
          " radial cells in geodesic [2 R0, 4 R0]");
    }
  }
}
}  // namespace

int AnnulusGrid::lower_cell(double rho) const {
  const auto it = std::upper_bound(rho_cell.begin(), rho_cell.end(), rho);
  return static_cast<int>(it - rho_cell.begin());
}

AnnulusGrid build_annulus_grid(const DomainSpec& spec, double R_in, double R_out,
                               int n_r, int n_th) {
  if (!(R_in > 0.0) || !(R_out > R_in)) {
    throw std::invalid_argument("annulus requires 0 < R_in < R_out (geodesic)");
  }
  check_counts(n_r, n_th);
  const DiskRadius r_in = geodesic_to_disk(spec.a, R_in);
  const DiskRadius r_out = geodesic_to_disk(spec.a, R_out);
  const double t_in = std::log(r_in.r);
  const double t_out = std::log1p(-r_out.one_minus);
  std::vector<double> t_nodes(n_r + 1);
  const double dt = (t_out - t_in) / n_r;
  for (int i = 0; i <= n_r; ++i) t_nodes[i] = t_in + dt * i;
  AnnulusGrid g = build_from_nodes(spec, std::move(t_nodes), n_th);
  check_band_resolution(g);
  return g;
}

AnnulusGrid build_annulus_grid_nodes(const DomainSpec& spec,
                                     const std::vector<double>& t_nodes, int n_th) {
  check_counts(static_cast<int>(t_nodes.size()) - 1, n_th);
  for (std::size_t i = 0; i + 1 < t_nodes.size(); ++i) {
    if (!(t_nodes[i] < t_nodes[i + 1])) {
      throw std::invalid_argument("radial nodes must increase strictly");
    }
  }
  if (!(t_nodes.back() < 0.0)) {
    throw std::invalid_argument("log disk radius must be < 0");
  }
  AnnulusGrid g = build_from_nodes(spec, t_nodes, n_th);
  check_band_resolution(g);
  return g;
}

AnnulusGrid refine(const AnnulusGrid& g) {
  if (static_cast<std::size_t>(2 * g.n_r) * (2 * g.n_th) > kCellGuard) {
    throw std::invalid_argument("refinement exceeds the 4096^2 cell guard");
  }
  std::vector<double> t_nodes(2 * g.n_r + 1);
  for (int i = 0; i < g.n_r; ++i) {
    t_nodes[2 * i] = g.t_node[i];
    t_nodes[2 * i + 1] = 0.5 * (g.t_node[i] + g.t_node[i + 1]);
  }
  t_nodes[2 * g.n_r] = g.t_node[g.n_r];
  return build_from_nodes(g.spec, std::move(t_nodes), 2 * g.n_th);
}

}  // namespace hyperstokes
