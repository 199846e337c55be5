// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/field.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hyperstokes {

double integrate(const ScalarField& f, Measure m) {
  if (f.grid == nullptr) throw std::invalid_argument("field has no grid");
  const AnnulusGrid& g = *f.grid;
  double total = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double w =
        g.cell_area[i] * (m == Measure::hyperbolic ? 1.0 / g.W_cell[i] : 1.0);
    double row = 0.0;
    for (int j = 0; j < g.n_th; ++j) row += f.at(i, j);
    total += w * row;
  }
  return total;
}

ScalarField sample_cells(const AnnulusGrid& g,
                         const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      out.at(i, j) = f(g.rad_cell[i].r, g.theta_cell[j]);
    }
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

namespace {
void write_row(std::ostream& os, double r, double theta,
               const double* c, int nc) {
  char buf[64];
  auto put = [&](double x, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g%c", x, sep);
    os << buf;
  };
  put(r, ',');
  put(theta, ',');
  put(r * std::cos(theta), ',');
  put(r * std::sin(theta), ',');
  for (int k = 0; k < nc; ++k) put(c[k], k + 1 == nc ? '\n' : ',');
}
}  // namespace

void dump_csv(std::ostream& os, const ScalarField& f) {
  const AnnulusGrid& g = *f.grid;
  os << "r,theta,y1,y2,c1\n";
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double c = f.at(i, j);
      write_row(os, g.rad_cell[i].r, g.theta_cell[j], &c, 1);
    }
  }
}

void dump_csv(std::ostream& os, const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  os << "r,theta,y1,y2,c1,c2\n";
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double vr = 0.5 * (u.r_at(i, j) + u.r_at(i + 1, j));
      const double vt = 0.5 * (u.th_at(i, j) + u.th_at(i, g.jnext(j)));
      const double c[2] = {vr * g.cos_cell[j] - vt * g.sin_cell[j],
                           vr * g.sin_cell[j] + vt * g.cos_cell[j]};
      write_row(os, g.rad_cell[i].r, g.theta_cell[j], c, 2);
    }
  }
}

void dump_csv(std::ostream& os, const TensorField& t) {
  const AnnulusGrid& g = *t.grid;
  os << "r,theta,y1,y2,c1,c2,c3,c4\n";
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      const double c[4] = {t.comp[0][k], t.comp[1][k], t.comp[2][k],
                           t.comp[3][k]};
      write_row(os, g.rad_cell[i].r, g.theta_cell[j], c, 4);
    }
  }
}

}  // namespace hyperstokes
