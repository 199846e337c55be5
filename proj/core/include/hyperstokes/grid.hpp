// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_GRID_HPP
#define HYPERSTOKES_GRID_HPP

#include <cstddef>
#include <vector>

#include "hyperstokes/chart.hpp"

namespace hyperstokes {

enum class NodeKind { interior, inner_boundary, outer_boundary };

// Staggered polar grid on the disk annulus r_in < |y| < r_out.
//
// Layout (MAC staggering):
//   cells    (i,j): centers at (r_cell[i], theta_cell[j]),  i<n_r, j<n_th
//   r-faces  (i,j): (r_node[i], theta_cell[j]), carry the radial 1-form
//                   component; i=0 and i=n_r are the walls
//   th-faces (i,j): (r_cell[i], theta_node[j]), carry the angular component
//   vertices (i,j): (r_node[i], theta_node[j]), carry vorticity
//
// Radial nodes are uniform in log r.  Under the conformal metric this makes
// every cell geometrically similar: the hyperbolic aspect ratio
// (radial side / angular side) is the same constant dlog(r)/dtheta for all
// cells, and the log-radial resolution matches the scale on which fields
// pulled back from the hyperbolic plane vary.
struct AnnulusGrid {
  DomainSpec spec;
  DiskChart chart;

  AnnulusGrid(const DomainSpec& s, const DiskChart& c) : spec(s), chart(c) {}

  double R_in = 0.0, R_out = 0.0;  // geodesic radii of the walls
  int n_r = 0, n_th = 0;

  // radial tables (size n_r+1 for nodes, n_r for cells)
  std::vector<double> t_node;               // log r at nodes
  std::vector<DiskRadius> rad_node;
  std::vector<DiskRadius> rad_cell;         // geometric mean of adjacent nodes
  std::vector<double> rho_node, rho_cell;   // geodesic radii
  std::vector<double> dr;                   // node spacing, size n_r
  std::vector<double> dr_vertex;            // spacing between cell centers; walls use the half step. size n_r+1

  // angular tables
  double dtheta = 0.0;
  std::vector<double> theta_node, theta_cell;            // size n_th
  std::vector<double> cos_node, sin_node, cos_cell, sin_cell;

  // Euclidean dual measures, per theta column (the grid is theta-uniform)
  std::vector<double> cell_area;     // size n_r
  std::vector<double> rface_area;    // size n_r+1, wall faces get half cells
  std::vector<double> vertex_area;   // size n_r+1 (same dual bands as r-faces)

  // conformal pairing weight a^2(1-r^2)^2/4 cached per radius
  std::vector<double> W_node, W_cell;

  double aspect_ratio = 0.0;  // dlog(r) / dtheta, uniform over the grid

  int cells() const { return n_r * n_th; }
  std::size_t cidx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_th + j;
  }
  std::size_t ridx(int i, int j) const {  // r-face index, i in [0, n_r]
    return static_cast<std::size_t>(i) * n_th + j;
  }
  int jnext(int j) const { return j + 1 < n_th ? j + 1 : 0; }
  int jprev(int j) const { return j > 0 ? j - 1 : n_th - 1; }

  double r_node_v(int i) const { return rad_node[i].r; }
  double r_cell_v(int i) const { return rad_cell[i].r; }

  NodeKind node_kind(int i) const {
    if (i == 0) return NodeKind::inner_boundary;
    if (i == n_r) return NodeKind::outer_boundary;
    return NodeKind::interior;
  }

  // first cell index with rho_cell > rho (n_r if none)
  int lower_cell(double rho) const;
};

// Builds the grid for the truncated exterior domain.  R_in and R_out are
// geodesic radii.  Requires n_r >= 8, n_th >= 16 and even; rejects grids
// whose geodesic band [2R0, 4R0] (when inside the domain) has fewer than 8
// radial cells, grids beyond the 4096^2 cell guard, and cell aspect ratios
// outside [1/8, 8].
AnnulusGrid build_annulus_grid(const DomainSpec& spec, double R_in, double R_out,
                               int n_r, int n_th);

// Grid over an explicit strictly increasing log-radius node vector (last
// entry < 0).  Domain exhaustion uses this to extend a shared base grading
// by refined outer shells so stage grids are nested node-for-node.
AnnulusGrid build_annulus_grid_nodes(const DomainSpec& spec,
                                     const std::vector<double>& t_nodes, int n_th);

/// Doubled resolution with nested nodes.
AnnulusGrid refine(const AnnulusGrid& g);

}  // namespace hyperstokes

#endif
