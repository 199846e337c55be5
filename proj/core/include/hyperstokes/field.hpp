// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_FIELD_HPP
#define HYPERSTOKES_FIELD_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hyperstokes/grid.hpp"

namespace hyperstokes {

// Boundary-condition class a field is known to satisfy on the annulus walls.
enum class BoundaryClass { free_field, zero_inner, zero_both };

struct ScalarField {
  const AnnulusGrid* grid = nullptr;
  std::vector<double> v;  // cell samples, row-major over (i_r, i_th)

  ScalarField() = default;
  explicit ScalarField(const AnnulusGrid& g)
      : grid(&g), v(static_cast<std::size_t>(g.cells()), 0.0) {}

  double& at(int i, int j) { return v[grid->cidx(i, j)]; }
  double at(int i, int j) const { return v[grid->cidx(i, j)]; }
};

// A 1-form in disk-chart components on the staggered faces: ur holds the
// radial component on r-faces (walls included), uth the angular component
// on theta-faces.  Both are physical polar-frame components of the
// Euclidean pullback; the hyperbolic 1-form has the same component arrays.
struct OneFormField {
  const AnnulusGrid* grid = nullptr;
  std::vector<double> ur;   // (n_r+1) x n_th
  std::vector<double> uth;  // n_r x n_th
  BoundaryClass bc = BoundaryClass::free_field;

  OneFormField() = default;
  explicit OneFormField(const AnnulusGrid& g,
                        BoundaryClass b = BoundaryClass::free_field)
      : grid(&g),
        ur(static_cast<std::size_t>(g.n_r + 1) * g.n_th, 0.0),
        uth(static_cast<std::size_t>(g.n_r) * g.n_th, 0.0),
        bc(b) {}

  double& r_at(int i, int j) { return ur[grid->ridx(i, j)]; }
  double r_at(int i, int j) const { return ur[grid->ridx(i, j)]; }
  double& th_at(int i, int j) { return uth[grid->cidx(i, j)]; }
  double th_at(int i, int j) const { return uth[grid->cidx(i, j)]; }
};

// Rank-2 tensor samples at cell centers, components in the chart coordinate
// basis, ordered (11, 12, 21, 22) with the first index the derivative slot.
struct TensorField {
  const AnnulusGrid* grid = nullptr;
  std::array<std::vector<double>, 4> comp;

  TensorField() = default;
  explicit TensorField(const AnnulusGrid& g) : grid(&g) {
    for (auto& c : comp) c.assign(static_cast<std::size_t>(g.cells()), 0.0);
  }
};

// Vertex samples; home of the vorticity density.
struct VertexField {
  const AnnulusGrid* grid = nullptr;
  std::vector<double> v;  // (n_r+1) x n_th at (r_node[i], theta_node[j])

  VertexField() = default;
  explicit VertexField(const AnnulusGrid& g)
      : grid(&g), v(static_cast<std::size_t>(g.n_r + 1) * g.n_th, 0.0) {}

  double& at(int i, int j) { return v[grid->ridx(i, j)]; }
  double at(int i, int j) const { return v[grid->ridx(i, j)]; }
};

enum class Measure { euclidean, hyperbolic };

/// Midpoint-rule integral of a cell density against the chosen area measure.
double integrate(const ScalarField& f, Measure m);

ScalarField sample_cells(const AnnulusGrid& g,
                         const std::function<double(double r, double theta)>& f);

double max_abs(const std::vector<double>& v);

// CSV dumps: header r,theta,y1,y2,c1[,c2[,c3,c4]], row-major over (i_r,i_th),
// 17 significant digits, LF line endings.  1-forms are written with their
// chart components interpolated to cell centers.
void dump_csv(std::ostream& os, const ScalarField& f);
void dump_csv(std::ostream& os, const OneFormField& u);
void dump_csv(std::ostream& os, const TensorField& t);

}  // namespace hyperstokes

#endif
