// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperstokes {

namespace {
const AnnulusGrid& same_grid(const OneFormField& u, const OneFormField& v) {
  if (u.grid == nullptr || u.grid != v.grid) {
    throw std::invalid_argument("fields live on different grids");
  }
  return *u.grid;
}

double wall_val(const std::vector<double>& w, int j) {
  return w.empty() ? 0.0 : w[j];
}
}  // namespace

double WeakFunctional::act(const OneFormField& phi) const {
  if (grid != phi.grid) throw std::invalid_argument("functional/field grid mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < fur.size(); ++k) s += fur[k] * phi.ur[k];
  for (std::size_t k = 0; k < futh.size(); ++k) s += futh[k] * phi.uth[k];
  return s;
}

void WeakFunctional::axpy(double c, const WeakFunctional& other) {
  for (std::size_t k = 0; k < fur.size(); ++k) fur[k] += c * other.fur[k];
  for (std::size_t k = 0; k < futh.size(); ++k) futh[k] += c * other.futh[k];
}

void WeakFunctional::scale(double c) {
  for (auto& x : fur) x *= c;
  for (auto& x : futh) x *= c;
}

ScalarField pairing(const OneFormField& u, const OneFormField& v) {
  const AnnulusGrid& g = same_grid(u, v);
  ScalarField out(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double W = g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const int jn = g.jnext(j);
      const double ar = 0.5 * (u.r_at(i, j) + u.r_at(i + 1, j));
      const double at = 0.5 * (u.th_at(i, j) + u.th_at(i, jn));
      const double br = 0.5 * (v.r_at(i, j) + v.r_at(i + 1, j));
      const double bt = 0.5 * (v.th_at(i, j) + v.th_at(i, jn));
      out.at(i, j) = W * (ar * br + at * bt);
    }
  }
  return out;
}

ScalarField divergence_integrated(const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  ScalarField out(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double ri = g.r_node_v(i), ro = g.r_node_v(i + 1);
    for (int j = 0; j < g.n_th; ++j) {
      out.at(i, j) = (ro * u.r_at(i + 1, j) - ri * u.r_at(i, j)) * g.dtheta +
                     (u.th_at(i, g.jnext(j)) - u.th_at(i, j)) * g.dr[i];
    }
  }
  return out;
}

ScalarField divergence_euclid(const OneFormField& u) {
  ScalarField out = divergence_integrated(u);
  const AnnulusGrid& g = *u.grid;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) out.at(i, j) /= g.cell_area[i];
  }
  return out;
}

ScalarField codifferential(const OneFormField& u) {
  ScalarField out = divergence_euclid(u);
  const AnnulusGrid& g = *u.grid;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) out.at(i, j) *= -g.W_cell[i];
  }
  return out;
}

OneFormField ext_derivative(const ScalarField& f) {
  const AnnulusGrid& g = *f.grid;
  OneFormField d(g, BoundaryClass::free_field);
  for (int i = 1; i < g.n_r; ++i) {
    const double coef = g.r_node_v(i) * g.dtheta / g.rface_area[i];
    for (int j = 0; j < g.n_th; ++j) {
      d.r_at(i, j) = coef * (f.at(i, j) - f.at(i - 1, j));
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double coef = g.dr[i] / g.cell_area[i];
    for (int j = 0; j < g.n_th; ++j) {
      d.th_at(i, j) = coef * (f.at(i, j) - f.at(i, g.jprev(j)));
    }
  }
  return d;
}

namespace {
// curl at vertex (i, j); walls use the supplied tangential trace.
double vertex_curl(const AnnulusGrid& g, const OneFormField& u, int i, int j,
                   const WallTangential* walls) {
  const double r = g.r_node_v(i);
  const double dth_term =
      (u.r_at(i, j) - u.r_at(i, g.jprev(j))) / (r * g.dtheta);
  double dr_term;
  if (i == 0) {
    const double t_in = walls ? wall_val(walls->inner, j) : 0.0;
    dr_term = (g.r_cell_v(0) * u.th_at(0, j) - r * t_in) / (r * g.dr_vertex[0]);
  } else if (i == g.n_r) {
    const double t_out = walls ? wall_val(walls->outer, j) : 0.0;
    dr_term = (r * t_out - g.r_cell_v(i - 1) * u.th_at(i - 1, j)) /
              (r * g.dr_vertex[i]);
  } else {
    dr_term = (g.r_cell_v(i) * u.th_at(i, j) -
               g.r_cell_v(i - 1) * u.th_at(i - 1, j)) /
              (r * g.dr_vertex[i]);
  }
  return dr_term - dth_term;
}
}  // namespace

VertexField vorticity(const OneFormField& u, const WallTangential* walls) {
  const AnnulusGrid& g = *u.grid;
  VertexField out(g);
  for (int i = 0; i <= g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      out.at(i, j) = vertex_curl(g, u, i, j, walls);
    }
  }
  return out;
}

double vorticity_l2_sq(const OneFormField& u, Measure m,
                       const WallTangential* walls) {
  const AnnulusGrid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i <= g.n_r; ++i) {
    const double w = g.vertex_area[i] * (m == Measure::hyperbolic ? g.W_node[i] : 1.0);
    for (int j = 0; j < g.n_th; ++j) {
      const double c = vertex_curl(g, u, i, j, walls);
      s += w * c * c;
    }
  }
  return s;
}

OneFormField stream_to_oneform(const VertexField& psi) {
  const AnnulusGrid& g = *psi.grid;
  OneFormField u(g, BoundaryClass::zero_both);
  for (int i = 0; i <= g.n_r; ++i) {
    const double coef = 1.0 / (g.r_node_v(i) * g.dtheta);
    for (int j = 0; j < g.n_th; ++j) {
      u.r_at(i, j) = coef * (psi.at(i, g.jnext(j)) - psi.at(i, j));
    }
  }
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      u.th_at(i, j) = -(psi.at(i + 1, j) - psi.at(i, j)) / g.dr[i];
    }
  }
  return u;
}

// --- covariant derivative --------------------------------------------------

namespace {
// Polar derivative block interpolated to the cell center (i,j).
struct CenterBlock {
  double vr, vt, dvr_dr, dvt_dth, dvr_dth, dvt_dr;
};

CenterBlock center_block(const AnnulusGrid& g, const OneFormField& u, int i, int j) {
  CenterBlock b{};
  const int jn = g.jnext(j), jp = g.jprev(j);
  b.vr = 0.5 * (u.r_at(i, j) + u.r_at(i + 1, j));
  b.vt = 0.5 * (u.th_at(i, j) + u.th_at(i, jn));
  b.dvr_dr = (u.r_at(i + 1, j) - u.r_at(i, j)) / g.dr[i];
  b.dvt_dth = (u.th_at(i, jn) - u.th_at(i, j)) / g.dtheta;
  b.dvr_dth = (u.r_at(i, jn) - u.r_at(i, jp) + u.r_at(i + 1, jn) -
               u.r_at(i + 1, jp)) /
              (4.0 * g.dtheta);
  auto radial = [&](int jj) {
    if (i == 0) {
      return (u.th_at(1, jj) - u.th_at(0, jj)) /
             (g.r_cell_v(1) - g.r_cell_v(0));
    }
    if (i == g.n_r - 1) {
      return (u.th_at(i, jj) - u.th_at(i - 1, jj)) /
             (g.r_cell_v(i) - g.r_cell_v(i - 1));
    }
    return (u.th_at(i + 1, jj) - u.th_at(i - 1, jj)) /
           (g.r_cell_v(i + 1) - g.r_cell_v(i - 1));
  };
  b.dvt_dr = 0.5 * (radial(j) + radial(jn));
  return b;
}
}  // namespace

TensorField covariant_derivative(const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  TensorField out(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_cell_v(i);
    const double q = 2.0 / g.rad_cell[i].one_minus_sq();  // Christoffel scale
    for (int j = 0; j < g.n_th; ++j) {
      const CenterBlock b = center_block(g, u, i, j);
      const double c = g.cos_cell[j], s = g.sin_cell[j];
      const double u1 = b.vr * c - b.vt * s;
      const double u2 = b.vr * s + b.vt * c;
      const double dru1 = b.dvr_dr * c - b.dvt_dr * s;
      const double dru2 = b.dvr_dr * s + b.dvt_dr * c;
      const double dthu1 = b.dvr_dth * c - b.vr * s - b.dvt_dth * s - b.vt * c;
      const double dthu2 = b.dvr_dth * s + b.vr * c + b.dvt_dth * c - b.vt * s;
      const double d1u1 = c * dru1 - s / r * dthu1;
      const double d1u2 = c * dru2 - s / r * dthu2;
      const double d2u1 = s * dru1 + c / r * dthu1;
      const double d2u2 = s * dru2 + c / r * dthu2;
      const double y1 = r * c, y2 = r * s;
      const double ga = q * (y1 * u1 - y2 * u2);
      const double gb = q * (y2 * u1 + y1 * u2);
      const std::size_t k = g.cidx(i, j);
      out.comp[0][k] = d1u1 - ga;
      out.comp[1][k] = d1u2 - gb;
      out.comp[2][k] = d2u1 - gb;
      out.comp[3][k] = d2u2 + ga;
    }
  }
  return out;
}

TensorField deformation(const OneFormField& u) {
  TensorField t = covariant_derivative(u);
  const std::size_t n = t.comp[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    const double sym = 0.5 * (t.comp[1][k] + t.comp[2][k]);
    t.comp[1][k] = sym;
    t.comp[2][k] = sym;
  }
  return t;
}

WeakFunctional covariant_adjoint(const TensorField& tau) {
  const AnnulusGrid& g = *tau.grid;
  WeakFunctional out(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_cell_v(i);
    const double q = 2.0 / g.rad_cell[i].one_minus_sq();
    for (int j = 0; j < g.n_th; ++j) {
      const int jn = g.jnext(j), jp = g.jprev(j);
      const std::size_t k = g.cidx(i, j);
      const double t11 = tau.comp[0][k], t12 = tau.comp[1][k];
      const double t21 = tau.comp[2][k], t22 = tau.comp[3][k];
      const double c = g.cos_cell[j], s = g.sin_cell[j];
      const double y1 = r * c, y2 = r * s;

      // weights on the intermediate cartesian block
      const double w_d1u1 = t11, w_d1u2 = t12, w_d2u1 = t21, w_d2u2 = t22;
      const double w_ga = -t11 + t22;       // ga enters comps 11 (-) and 22 (+)
      const double w_gb = -t12 - t21;
      // ga = q(y1 u1 - y2 u2), gb = q(y2 u1 + y1 u2)
      double w_u1 = w_ga * q * y1 + w_gb * q * y2;
      double w_u2 = -w_ga * q * y2 + w_gb * q * y1;
      // d1 = c d_r - (s/r) d_th ; d2 = s d_r + (c/r) d_th
      const double w_dru1 = w_d1u1 * c + w_d2u1 * s;
      const double w_dru2 = w_d1u2 * c + w_d2u2 * s;
      const double w_dthu1 = -w_d1u1 * s / r + w_d2u1 * c / r;
      const double w_dthu2 = -w_d1u2 * s / r + w_d2u2 * c / r;
      // u1 = vr c - vt s, u2 = vr s + vt c
      // dru1 = dvr_dr c - dvt_dr s, dru2 = dvr_dr s + dvt_dr c
      // dthu1 = dvr_dth c - vr s - dvt_dth s - vt c
      // dthu2 = dvr_dth s + vr c + dvt_dth c - vt s
      double w_vr = w_u1 * c + w_u2 * s - w_dthu1 * s + w_dthu2 * c;
      double w_vt = -w_u1 * s + w_u2 * c - w_dthu1 * c - w_dthu2 * s;
      const double w_dvr_dr = w_dru1 * c + w_dru2 * s;
      const double w_dvt_dr = -w_dru1 * s + w_dru2 * c;
      const double w_dvr_dth = w_dthu1 * c + w_dthu2 * s;
      const double w_dvt_dth = -w_dthu1 * s + w_dthu2 * c;

      // scatter the stencils transposed
      out.fur[g.ridx(i, j)] += 0.5 * w_vr - w_dvr_dr / g.dr[i];
      out.fur[g.ridx(i + 1, j)] += 0.5 * w_vr + w_dvr_dr / g.dr[i];
      const double cth = w_dvr_dth / (4.0 * g.dtheta);
      out.fur[g.ridx(i, jn)] += cth;
      out.fur[g.ridx(i, jp)] -= cth;
      out.fur[g.ridx(i + 1, jn)] += cth;
      out.fur[g.ridx(i + 1, jp)] -= cth;

      out.futh[g.cidx(i, j)] += 0.5 * w_vt - w_dvt_dth / g.dtheta;
      out.futh[g.cidx(i, jn)] += 0.5 * w_vt + w_dvt_dth / g.dtheta;
      for (int jj : {j, jn}) {
        const double w = 0.5 * w_dvt_dr;
        if (i == 0) {
          const double d = g.r_cell_v(1) - g.r_cell_v(0);
          out.futh[g.cidx(1, jj)] += w / d;
          out.futh[g.cidx(0, jj)] -= w / d;
        } else if (i == g.n_r - 1) {
          const double d = g.r_cell_v(i) - g.r_cell_v(i - 1);
          out.futh[g.cidx(i, jj)] += w / d;
          out.futh[g.cidx(i - 1, jj)] -= w / d;
        } else {
          const double d = g.r_cell_v(i + 1) - g.r_cell_v(i - 1);
          out.futh[g.cidx(i + 1, jj)] += w / d;
          out.futh[g.cidx(i - 1, jj)] -= w / d;
        }
      }
    }
  }
  return out;
}

void center_components(const OneFormField& u, ScalarField& u1, ScalarField& u2) {
  const AnnulusGrid& g = *u.grid;
  u1 = ScalarField(g);
  u2 = ScalarField(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double vr = 0.5 * (u.r_at(i, j) + u.r_at(i + 1, j));
      const double vt = 0.5 * (u.th_at(i, j) + u.th_at(i, g.jnext(j)));
      u1.at(i, j) = vr * g.cos_cell[j] - vt * g.sin_cell[j];
      u2.at(i, j) = vr * g.sin_cell[j] + vt * g.cos_cell[j];
    }
  }
}

WeakFunctional center_adjoint(const ScalarField& w1, const ScalarField& w2) {
  const AnnulusGrid& g = *w1.grid;
  WeakFunctional out(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double a = w1.at(i, j), b = w2.at(i, j);
      const double wr = 0.5 * (a * g.cos_cell[j] + b * g.sin_cell[j]);
      const double wt = 0.5 * (-a * g.sin_cell[j] + b * g.cos_cell[j]);
      out.fur[g.ridx(i, j)] += wr;
      out.fur[g.ridx(i + 1, j)] += wr;
      out.futh[g.cidx(i, j)] += wt;
      out.futh[g.cidx(i, g.jnext(j))] += wt;
    }
  }
  return out;
}

// --- inner products ---------------------------------------------------------

double l2_inner(const OneFormField& u, const OneFormField& v) {
  const AnnulusGrid& g = same_grid(u, v);
  double s = 0.0;
  for (int i = 0; i <= g.n_r; ++i) {
    const double w = g.rface_area[i];
    for (int j = 0; j < g.n_th; ++j) s += w * u.r_at(i, j) * v.r_at(i, j);
  }
  for (int i = 0; i < g.n_r; ++i) {
    const double w = g.cell_area[i];
    for (int j = 0; j < g.n_th; ++j) s += w * u.th_at(i, j) * v.th_at(i, j);
  }
  return s;
}

double energy_inner(const OneFormField& u, const OneFormField& v,
                    const WallTangential* walls_u, const WallTangential* walls_v) {
  const AnnulusGrid& g = same_grid(u, v);
  const double a = g.spec.a;
  double s = 2.0 * a * a * l2_inner(u, v);
  for (int i = 0; i <= g.n_r; ++i) {
    const double w = g.vertex_area[i] * g.W_node[i];
    for (int j = 0; j < g.n_th; ++j) {
      s += w * vertex_curl(g, u, i, j, walls_u) * vertex_curl(g, v, i, j, walls_v);
    }
  }
  return s;
}

double h10_inner(const OneFormField& u, const OneFormField& v) {
  if (u.bc != BoundaryClass::zero_both || v.bc != BoundaryClass::zero_both) {
    throw std::invalid_argument(
        "energy inner product requires fields vanishing on both walls");
  }
  return energy_inner(u, v);
}

double h1_grad_sq(const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  const TensorField t = covariant_derivative(u);
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double w = g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      s += w * (t.comp[0][k] * t.comp[0][k] + t.comp[1][k] * t.comp[1][k] +
                t.comp[2][k] * t.comp[2][k] + t.comp[3][k] * t.comp[3][k]);
    }
  }
  return s;
}

double deformation_energy(const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  const TensorField t = deformation(u);
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double w = 2.0 * g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      s += w * (t.comp[0][k] * t.comp[0][k] + t.comp[1][k] * t.comp[1][k] +
                t.comp[2][k] * t.comp[2][k] + t.comp[3][k] * t.comp[3][k]);
    }
  }
  return s;
}

namespace {
double l4_norm_pow4(const OneFormField& u) {
  const AnnulusGrid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double w = g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const double vr = 0.5 * (u.r_at(i, j) + u.r_at(i + 1, j));
      const double vt = 0.5 * (u.th_at(i, j) + u.th_at(i, g.jnext(j)));
      const double m2 = vr * vr + vt * vt;
      s += w * m2 * m2;
    }
  }
  return s;
}
}  // namespace

FieldNorms norms(const OneFormField& u) {
  FieldNorms n;
  const double l2sq = l2_inner(u, u);
  n.l2 = std::sqrt(l2sq);
  n.l4 = std::pow(l4_norm_pow4(u), 0.25);
  n.h1 = std::sqrt(h1_grad_sq(u) + l2sq);
  return n;
}

double inner(const OneFormField& u, const OneFormField& v, InnerProductKind kind) {
  switch (kind) {
    case InnerProductKind::L2:
      return l2_inner(u, v);
    case InnerProductKind::H10_energy:
      return h10_inner(u, v);
    case InnerProductKind::L4norm: {
      if (&u != &v) {
        throw std::invalid_argument("L4 is a norm, not a bilinear form");
      }
      return std::sqrt(l4_norm_pow4(u));
    }
  }
  throw std::logic_error("unknown inner product kind");
}

// --- convection --------------------------------------------------------------

double trilinear_raw(const OneFormField& th, const OneFormField& v,
                     const OneFormField& ph) {
  const AnnulusGrid& g = same_grid(th, v);
  same_grid(v, ph);
  ScalarField t1, t2, p1, p2;
  center_components(th, t1, t2);
  center_components(ph, p1, p2);
  const TensorField dv = covariant_derivative(v);
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double w = g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      const double c1 = t1.v[k] * dv.comp[0][k] + t2.v[k] * dv.comp[2][k];
      const double c2 = t1.v[k] * dv.comp[1][k] + t2.v[k] * dv.comp[3][k];
      s += w * (c1 * p1.v[k] + c2 * p2.v[k]);
    }
  }
  return s;
}

double trilinear(const OneFormField& th, const OneFormField& v,
                 const OneFormField& ph) {
  return 0.5 * (trilinear_raw(th, v, ph) - trilinear_raw(th, ph, v));
}

void add_trilinear_dual(const OneFormField& th, const OneFormField& v,
                        double coeff, WeakFunctional& out) {
  const AnnulusGrid& g = same_grid(th, v);
  ScalarField t1, t2, v1, v2;
  center_components(th, t1, t2);
  center_components(v, v1, v2);
  const TensorField dv = covariant_derivative(v);

  // 0.5 B(th, v, .) : phi undifferentiated at centers
  ScalarField g1(g), g2(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double w = 0.5 * coeff * g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      g1.v[k] = w * (t1.v[k] * dv.comp[0][k] + t2.v[k] * dv.comp[2][k]);
      g2.v[k] = w * (t1.v[k] * dv.comp[1][k] + t2.v[k] * dv.comp[3][k]);
    }
  }
  out.axpy(1.0, center_adjoint(g1, g2));

  // -0.5 B(th, phi, v) : phi enters through its covariant derivative
  TensorField tau(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double w = -0.5 * coeff * g.cell_area[i] * g.W_cell[i];
    for (int j = 0; j < g.n_th; ++j) {
      const std::size_t k = g.cidx(i, j);
      tau.comp[0][k] = w * t1.v[k] * v1.v[k];
      tau.comp[1][k] = w * t1.v[k] * v2.v[k];
      tau.comp[2][k] = w * t2.v[k] * v1.v[k];
      tau.comp[3][k] = w * t2.v[k] * v2.v[k];
    }
  }
  out.axpy(1.0, covariant_adjoint(tau));
}

// --- operator applications ----------------------------------------------------

WeakFunctional operator_apply(const OneFormField& u, const OperatorKind& kind,
                              const WallTangential* walls) {
  const AnnulusGrid& g = *u.grid;
  WeakFunctional out(g);
  // curl part: scatter A_v W_v curl(u) through the curl stencil transpose
  for (int i = 0; i <= g.n_r; ++i) {
    const double wv = g.vertex_area[i] * (kind.conformal_curl ? g.W_node[i] : 1.0);
    const double r = g.r_node_v(i);
    for (int j = 0; j < g.n_th; ++j) {
      const double q = wv * vertex_curl(g, u, i, j, walls);
      if (q == 0.0) continue;
      if (i == 0) {
        out.futh[g.cidx(0, j)] += q * g.r_cell_v(0) / (r * g.dr_vertex[0]);
      } else if (i == g.n_r) {
        out.futh[g.cidx(i - 1, j)] -=
            q * g.r_cell_v(i - 1) / (r * g.dr_vertex[i]);
      } else {
        out.futh[g.cidx(i, j)] += q * g.r_cell_v(i) / (r * g.dr_vertex[i]);
        out.futh[g.cidx(i - 1, j)] -=
            q * g.r_cell_v(i - 1) / (r * g.dr_vertex[i]);
      }
      out.fur[g.ridx(i, j)] -= q / (r * g.dtheta);
      out.fur[g.ridx(i, g.jprev(j))] += q / (r * g.dtheta);
    }
  }
  if (kind.include_div) {
    const ScalarField dint = divergence_integrated(u);
    for (int i = 0; i < g.n_r; ++i) {
      const double wc = (kind.conformal_div ? g.W_cell[i] : 1.0) / g.cell_area[i];
      const double ri = g.r_node_v(i), ro = g.r_node_v(i + 1);
      for (int j = 0; j < g.n_th; ++j) {
        const double q = wc * dint.at(i, j);
        out.fur[g.ridx(i + 1, j)] += q * ro * g.dtheta;
        out.fur[g.ridx(i, j)] -= q * ri * g.dtheta;
        out.futh[g.cidx(i, g.jnext(j))] += q * g.dr[i];
        out.futh[g.cidx(i, j)] -= q * g.dr[i];
      }
    }
  }
  if (kind.mass_coeff != 0.0) {
    for (int i = 0; i <= g.n_r; ++i) {
      const double w = kind.mass_coeff * g.rface_area[i];
      for (int j = 0; j < g.n_th; ++j) {
        out.fur[g.ridx(i, j)] += w * u.r_at(i, j);
      }
    }
    for (int i = 0; i < g.n_r; ++i) {
      const double w = kind.mass_coeff * g.cell_area[i];
      for (int j = 0; j < g.n_th; ++j) {
        out.futh[g.cidx(i, j)] += w * u.th_at(i, j);
      }
    }
  }
  return out;
}

double operator_energy(const OneFormField& u, const OperatorKind& kind) {
  const AnnulusGrid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i <= g.n_r; ++i) {
    const double wv = g.vertex_area[i] * (kind.conformal_curl ? g.W_node[i] : 1.0);
    for (int j = 0; j < g.n_th; ++j) {
      const double c = vertex_curl(g, u, i, j, nullptr);
      s += wv * c * c;
    }
  }
  if (kind.include_div) {
    const ScalarField d = divergence_integrated(u);
    for (int i = 0; i < g.n_r; ++i) {
      const double wc = (kind.conformal_div ? g.W_cell[i] : 1.0) / g.cell_area[i];
      for (int j = 0; j < g.n_th; ++j) {
        s += wc * d.at(i, j) * d.at(i, j);
      }
    }
  }
  if (kind.mass_coeff != 0.0) s += kind.mass_coeff * l2_inner(u, u);
  return s;
}

WeakFunctional pressure_gradient_dual(const ScalarField& p) {
  const AnnulusGrid& g = *p.grid;
  WeakFunctional out(g);
  for (int i = 0; i < g.n_r; ++i) {
    const double ri = g.r_node_v(i), ro = g.r_node_v(i + 1);
    for (int j = 0; j < g.n_th; ++j) {
      const double q = p.at(i, j);
      out.fur[g.ridx(i + 1, j)] += q * ro * g.dtheta;
      out.fur[g.ridx(i, j)] -= q * ri * g.dtheta;
      out.futh[g.cidx(i, g.jnext(j))] += q * g.dr[i];
      out.futh[g.cidx(i, j)] -= q * g.dr[i];
    }
  }
  return out;
}

}  // namespace hyperstokes
