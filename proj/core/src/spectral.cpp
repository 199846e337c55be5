// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/spectral.hpp"

#include <fftw3.h>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace hyperstokes {

using cplx = std::complex<double>;

// --- ThetaFFT ---------------------------------------------------------------

ThetaFFT::ThetaFFT(int n_th) : n_th_(n_th) {
  rbuf_.resize(n_th_);
  cbuf_.resize(n_th_ / 2 + 1);
  fwd_ = fftw_plan_dft_r2c_1d(n_th_, rbuf_.data(),
                              reinterpret_cast<fftw_complex*>(cbuf_.data()),
                              FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_1d(n_th_, reinterpret_cast<fftw_complex*>(cbuf_.data()),
                              rbuf_.data(), FFTW_ESTIMATE);
  if (fwd_ == nullptr || inv_ == nullptr) {
    throw std::runtime_error("fftw plan creation failed");
  }
}

ThetaFFT::~ThetaFFT() {
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void ThetaFFT::forward(const double* data, int rows, double theta0,
                       cplx* spec) const {
  const int nm = modes();
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n_th_; ++j) rbuf_[j] = data[r * n_th_ + j];
    fftw_execute(static_cast<fftw_plan>(fwd_));
    for (int m = 0; m < nm; ++m) {
      spec[r * nm + m] = cbuf_[m] * std::polar(1.0, -m * theta0);
    }
  }
}

void ThetaFFT::inverse(const cplx* spec, int rows, double theta0,
                       double* data) const {
  const int nm = modes();
  const double scale = 1.0 / n_th_;
  for (int r = 0; r < rows; ++r) {
    for (int m = 0; m < nm; ++m) {
      cbuf_[m] = spec[r * nm + m] * std::polar(1.0, m * theta0);
    }
    if (n_th_ % 2 == 0) cbuf_[nm - 1].imag(0.0);
    fftw_execute(static_cast<fftw_plan>(inv_));
    for (int j = 0; j < n_th_; ++j) data[r * n_th_ + j] = rbuf_[j] * scale;
  }
}

// --- BandedComplexLU ----------------------------------------------------------

BandedComplexLU::BandedComplexLU(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, cplx(0.0, 0.0));
  ipiv_.assign(n_, 0);
}

void BandedComplexLU::add(int i, int j, cplx v) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_) {
    throw std::logic_error("banded entry outside the band");
  }
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] += v;
}

void BandedComplexLU::set(int i, int j, cplx v) {
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = v;
}

void BandedComplexLU::zero_row(int i) {
  for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) {
    set(i, j, cplx(0.0, 0.0));
  }
}

void BandedComplexLU::factor() {
  const lapack_int info = LAPACKE_zgbtrf(
      LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
      reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_,
      ipiv_.data());
  if (info != 0) {
    throw std::runtime_error("banded LU factorization failed (singular mode block), info=" +
                             std::to_string(info));
  }
  factored_ = true;
}

void BandedComplexLU::solve(cplx* rhs) const {
  if (!factored_) throw std::logic_error("solve before factor");
  const lapack_int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
      reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab_,
      ipiv_.data(), reinterpret_cast<lapack_complex_double*>(rhs), n_);
  if (info != 0) throw std::runtime_error("banded triangular solve failed");
}

// --- shared saddle assembly helpers -------------------------------------------

namespace {

struct BandGeometry {
  // band-local vertex spacing and dual area; interior vertices match the
  // grid tables, band walls use half cells.
  double drv(const AnnulusGrid& g, int i_lo, int i_hi, int iv) const {
    if (iv == i_lo) return g.r_cell_v(i_lo) - g.r_node_v(i_lo);
    if (iv == i_hi) return g.r_node_v(i_hi) - g.r_cell_v(i_hi - 1);
    return g.r_cell_v(iv) - g.r_cell_v(iv - 1);
  }
  double varea(const AnnulusGrid& g, int i_lo, int i_hi, int iv) const {
    auto ring = [&](double lo, double hi) {
      return 0.5 * (hi * hi - lo * lo) * g.dtheta;
    };
    if (iv == i_lo) return ring(g.r_node_v(i_lo), g.r_cell_v(i_lo));
    if (iv == i_hi) return ring(g.r_cell_v(i_hi - 1), g.r_node_v(i_hi));
    return ring(g.r_cell_v(iv - 1), g.r_cell_v(iv));
  }
};

struct Entry {
  int idx;
  cplx c;
};

// w * (coef)^H (coef) accumulated into the block
void add_outer(BandedComplexLU& m, double w, const Entry* e, int n) {
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      m.add(e[s].idx, e[t].idx, w * std::conj(e[s].c) * e[t].c);
    }
  }
}

}  // namespace

// --- SpectralSaddleSolver ------------------------------------------------------

SpectralSaddleSolver::SpectralSaddleSolver(const AnnulusGrid& g,
                                           const OperatorKind& kind, int i_lo,
                                           int i_hi)
    : g_(&g),
      kind_(kind),
      i_lo_(i_lo),
      i_hi_(i_hi < 0 ? g.n_r : i_hi),
      fft_(g.n_th) {
  if (i_lo_ < 0 || i_hi_ > g.n_r || i_hi_ - i_lo_ < 2) {
    throw std::invalid_argument("saddle band must contain at least two cells");
  }
  nb_ = i_hi_ - i_lo_;
  nvar_ = 3 * nb_ - 1;
  assemble();
}

void SpectralSaddleSolver::assemble() {
  const AnnulusGrid& g = *g_;
  const BandGeometry bg;
  const int nm = fft_.modes();
  lu_.reserve(nm);
  for (int m = 0; m < nm; ++m) {
    lu_.emplace_back(nvar_, 3, 3);
    BandedComplexLU& blk = lu_.back();
    const cplx dm(0.0, 2.0 * std::sin(0.5 * m * g.dtheta));  // centered theta diff

    // curl energy over band vertices
    for (int iv = i_lo_; iv <= i_hi_; ++iv) {
      const double r = g.r_node_v(iv);
      const double w =
          bg.varea(g, i_lo_, i_hi_, iv) * (kind_.conformal_curl ? g.W_node[iv] : 1.0);
      const double drv = bg.drv(g, i_lo_, i_hi_, iv);
      Entry e[3];
      int n = 0;
      const int k = iv - i_lo_;
      if (iv == i_lo_) {
        e[n++] = {idx_uth(0), cplx(g.r_cell_v(i_lo_) / (r * drv), 0.0)};
      } else if (iv == i_hi_) {
        e[n++] = {idx_uth(nb_ - 1), cplx(-g.r_cell_v(i_hi_ - 1) / (r * drv), 0.0)};
      } else {
        e[n++] = {idx_uth(k), cplx(g.r_cell_v(iv) / (r * drv), 0.0)};
        e[n++] = {idx_uth(k - 1), cplx(-g.r_cell_v(iv - 1) / (r * drv), 0.0)};
        e[n++] = {idx_ur(k - 1), -dm / (r * g.dtheta)};
      }
      add_outer(blk, w, e, n);
    }

    // divergence: energy (optional) and constraint rows
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      Entry e[3];
      int n = 0;
      if (k > 0) e[n++] = {idx_ur(k - 1), cplx(-g.r_node_v(i) * g.dtheta, 0.0)};
      if (k < nb_ - 1) e[n++] = {idx_ur(k), cplx(g.r_node_v(i + 1) * g.dtheta, 0.0)};
      e[n++] = {idx_uth(k), dm * g.dr[i]};
      if (kind_.include_div) {
        const double w =
            (kind_.conformal_div ? g.W_cell[i] : 1.0) / g.cell_area[i];
        add_outer(blk, w, e, n);
      }
      const int row = idx_p(k);
      for (int s = 0; s < n; ++s) {
        blk.add(row, e[s].idx, e[s].c);             // B
        blk.add(e[s].idx, row, std::conj(e[s].c));  // B^H
      }
    }

    // mass
    if (kind_.mass_coeff != 0.0) {
      for (int k = 0; k < nb_; ++k) {
        const int i = i_lo_ + k;
        blk.add(idx_uth(k), idx_uth(k), kind_.mass_coeff * g.cell_area[i]);
        if (k < nb_ - 1) {
          blk.add(idx_ur(k), idx_ur(k),
                  kind_.mass_coeff * bg.varea(g, i_lo_, i_hi_, i + 1));
        }
      }
    }

    // the m = 0 multiplier is defined up to a constant: pin the first cell
    if (m == 0) {
      blk.zero_row(idx_p(0));
      blk.set(idx_p(0), idx_p(0), cplx(1.0, 0.0));
    }
    blk.factor();
  }
}

void SpectralSaddleSolver::solve(const WeakFunctional& rhs_dual,
                                 const ScalarField& rhs_div, OneFormField& w,
                                 ScalarField& p) const {
  const AnnulusGrid& g = *g_;
  const int nm = fft_.modes();
  const double th_half = 0.5 * g.dtheta;

  std::vector<cplx> ur_spec(static_cast<std::size_t>(g.n_r + 1) * nm);
  std::vector<cplx> uth_spec(static_cast<std::size_t>(g.n_r) * nm);
  std::vector<cplx> cell_spec(static_cast<std::size_t>(g.n_r) * nm);
  fft_.forward(rhs_dual.fur.data(), g.n_r + 1, th_half, ur_spec.data());
  fft_.forward(rhs_dual.futh.data(), g.n_r, 0.0, uth_spec.data());
  fft_.forward(rhs_div.v.data(), g.n_r, th_half, cell_spec.data());

  std::vector<cplx> x(nvar_);
  for (int m = 0; m < nm; ++m) {
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      x[idx_uth(k)] = uth_spec[static_cast<std::size_t>(i) * nm + m];
      x[idx_p(k)] = cell_spec[static_cast<std::size_t>(i) * nm + m];
      if (k < nb_ - 1) {
        x[idx_ur(k)] = ur_spec[static_cast<std::size_t>(i + 1) * nm + m];
      }
    }
    if (m == 0) x[idx_p(0)] = cplx(0.0, 0.0);  // pinned gauge row
    lu_[m].solve(x.data());
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      uth_spec[static_cast<std::size_t>(i) * nm + m] = x[idx_uth(k)];
      cell_spec[static_cast<std::size_t>(i) * nm + m] = x[idx_p(k)];
      if (k < nb_ - 1) {
        ur_spec[static_cast<std::size_t>(i + 1) * nm + m] = x[idx_ur(k)];
      }
    }
    // zero everything outside the band for this mode
    for (int i = 0; i <= i_lo_; ++i) ur_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    for (int i = i_hi_; i <= g.n_r; ++i) ur_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    for (int i = 0; i < i_lo_; ++i) {
      uth_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
      cell_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    }
    for (int i = i_hi_; i < g.n_r; ++i) {
      uth_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
      cell_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    }
  }

  w = OneFormField(g, BoundaryClass::zero_both);
  p = ScalarField(g);
  fft_.inverse(ur_spec.data(), g.n_r + 1, th_half, w.ur.data());
  fft_.inverse(uth_spec.data(), g.n_r, 0.0, w.uth.data());
  fft_.inverse(cell_spec.data(), g.n_r, th_half, p.v.data());
}

double SpectralSaddleSolver::dual_norm(const WeakFunctional& l) const {
  OneFormField z;
  ScalarField q;
  ScalarField zero_div(*g_);
  solve(l, zero_div, z, q);
  const double s = l.act(z);
  return std::sqrt(std::max(0.0, s));
}

// --- SpectralDirichletSolver ----------------------------------------------------

SpectralDirichletSolver::SpectralDirichletSolver(const AnnulusGrid& g,
                                                 const OperatorKind& kind,
                                                 int i_lo, int i_hi)
    : g_(&g),
      kind_(kind),
      i_lo_(i_lo),
      i_hi_(i_hi < 0 ? g.n_r : i_hi),
      fft_(g.n_th) {
  if (i_lo_ < 0 || i_hi_ > g.n_r || i_hi_ - i_lo_ < 2) {
    throw std::invalid_argument("band must contain at least two cells");
  }
  nb_ = i_hi_ - i_lo_;
  nvar_ = 2 * nb_ - 1;
  assemble();
}

void SpectralDirichletSolver::assemble() {
  const AnnulusGrid& g = *g_;
  const BandGeometry bg;
  const int nm = fft_.modes();
  lu_.reserve(nm);
  for (int m = 0; m < nm; ++m) {
    lu_.emplace_back(nvar_, 2, 2);
    BandedComplexLU& blk = lu_.back();
    const cplx dm(0.0, 2.0 * std::sin(0.5 * m * g.dtheta));

    for (int iv = i_lo_; iv <= i_hi_; ++iv) {
      const double r = g.r_node_v(iv);
      const double w =
          bg.varea(g, i_lo_, i_hi_, iv) * (kind_.conformal_curl ? g.W_node[iv] : 1.0);
      const double drv = bg.drv(g, i_lo_, i_hi_, iv);
      Entry e[3];
      int n = 0;
      const int k = iv - i_lo_;
      if (iv == i_lo_) {
        e[n++] = {idx_uth(0), cplx(g.r_cell_v(i_lo_) / (r * drv), 0.0)};
      } else if (iv == i_hi_) {
        e[n++] = {idx_uth(nb_ - 1), cplx(-g.r_cell_v(i_hi_ - 1) / (r * drv), 0.0)};
      } else {
        e[n++] = {idx_uth(k), cplx(g.r_cell_v(iv) / (r * drv), 0.0)};
        e[n++] = {idx_uth(k - 1), cplx(-g.r_cell_v(iv - 1) / (r * drv), 0.0)};
        e[n++] = {idx_ur(k - 1), -dm / (r * g.dtheta)};
      }
      add_outer(blk, w, e, n);
    }
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      if (kind_.include_div) {
        Entry e[3];
        int n = 0;
        if (k > 0) e[n++] = {idx_ur(k - 1), cplx(-g.r_node_v(i) * g.dtheta, 0.0)};
        if (k < nb_ - 1) e[n++] = {idx_ur(k), cplx(g.r_node_v(i + 1) * g.dtheta, 0.0)};
        e[n++] = {idx_uth(k), dm * g.dr[i]};
        const double w = (kind_.conformal_div ? g.W_cell[i] : 1.0) / g.cell_area[i];
        add_outer(blk, w, e, n);
      }
      if (kind_.mass_coeff != 0.0) {
        blk.add(idx_uth(k), idx_uth(k), kind_.mass_coeff * g.cell_area[i]);
        if (k < nb_ - 1) {
          blk.add(idx_ur(k), idx_ur(k),
                  kind_.mass_coeff * bg.varea(g, i_lo_, i_hi_, i + 1));
        }
      }
    }
    blk.factor();
  }
}

void SpectralDirichletSolver::solve(const WeakFunctional& rhs_dual,
                                    OneFormField& w) const {
  const AnnulusGrid& g = *g_;
  const int nm = fft_.modes();
  const double th_half = 0.5 * g.dtheta;
  std::vector<cplx> ur_spec(static_cast<std::size_t>(g.n_r + 1) * nm);
  std::vector<cplx> uth_spec(static_cast<std::size_t>(g.n_r) * nm);
  fft_.forward(rhs_dual.fur.data(), g.n_r + 1, th_half, ur_spec.data());
  fft_.forward(rhs_dual.futh.data(), g.n_r, 0.0, uth_spec.data());

  std::vector<cplx> x(nvar_);
  for (int m = 0; m < nm; ++m) {
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      x[idx_uth(k)] = uth_spec[static_cast<std::size_t>(i) * nm + m];
      if (k < nb_ - 1) x[idx_ur(k)] = ur_spec[static_cast<std::size_t>(i + 1) * nm + m];
    }
    lu_[m].solve(x.data());
    for (int k = 0; k < nb_; ++k) {
      const int i = i_lo_ + k;
      uth_spec[static_cast<std::size_t>(i) * nm + m] = x[idx_uth(k)];
      if (k < nb_ - 1) ur_spec[static_cast<std::size_t>(i + 1) * nm + m] = x[idx_ur(k)];
    }
    for (int i = 0; i <= i_lo_; ++i) ur_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    for (int i = i_hi_; i <= g.n_r; ++i) ur_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    for (int i = 0; i < i_lo_; ++i) uth_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
    for (int i = i_hi_; i < g.n_r; ++i) uth_spec[static_cast<std::size_t>(i) * nm + m] = 0.0;
  }
  w = OneFormField(g, BoundaryClass::zero_both);
  fft_.inverse(ur_spec.data(), g.n_r + 1, th_half, w.ur.data());
  fft_.inverse(uth_spec.data(), g.n_r, 0.0, w.uth.data());
}

// --- SpectralPressureRecovery ----------------------------------------------------

SpectralPressureRecovery::SpectralPressureRecovery(const AnnulusGrid& g, int i_hi)
    : g_(&g), i_hi_(i_hi), fft_(g.n_th) {
  if (i_hi_ < 2 || i_hi_ > g.n_r) {
    throw std::invalid_argument("pressure recovery band must contain >= 2 cells");
  }
  const int nm = fft_.modes();
  lu_.reserve(nm);
  for (int m = 0; m < nm; ++m) {
    lu_.emplace_back(i_hi_, 1, 1);
    BandedComplexLU& blk = lu_.back();
    const cplx dm(0.0, 2.0 * std::sin(0.5 * m * g.dtheta));
    // normal equations of the face rows of B^H: shared interior ur faces give
    // the radial tridiagonal, the theta faces the |dm|^2 dr^2 diagonal.
    for (int i = 0; i < i_hi_; ++i) {
      double diag = std::norm(dm) * g.dr[i] * g.dr[i];
      if (i > 0) {
        const double c = g.r_node_v(i) * g.dtheta;
        diag += c * c;
        blk.add(i, i - 1, -c * c);
      }
      if (i < i_hi_ - 1) {
        const double c = g.r_node_v(i + 1) * g.dtheta;
        diag += c * c;
        blk.add(i, i + 1, -c * c);
      }
      blk.add(i, i, diag);
    }
    if (m == 0) {
      blk.zero_row(0);
      blk.set(0, 0, cplx(1.0, 0.0));
    }
    blk.factor();
  }
}

ScalarField SpectralPressureRecovery::solve(const WeakFunctional& l) const {
  const AnnulusGrid& g = *g_;
  const int nm = fft_.modes();
  const double th_half = 0.5 * g.dtheta;
  std::vector<cplx> ur_spec(static_cast<std::size_t>(g.n_r + 1) * nm);
  std::vector<cplx> uth_spec(static_cast<std::size_t>(g.n_r) * nm);
  fft_.forward(l.fur.data(), g.n_r + 1, th_half, ur_spec.data());
  fft_.forward(l.futh.data(), g.n_r, 0.0, uth_spec.data());

  std::vector<cplx> cell_spec(static_cast<std::size_t>(g.n_r) * nm, cplx(0.0));
  std::vector<cplx> rhs(i_hi_);
  for (int m = 0; m < nm; ++m) {
    const cplx dm(0.0, 2.0 * std::sin(0.5 * m * g.dtheta));
    // rhs = B l over faces interior to the band
    for (int i = 0; i < i_hi_; ++i) {
      cplx s = dm * g.dr[i] * uth_spec[static_cast<std::size_t>(i) * nm + m];
      if (i > 0) {
        s -= g.r_node_v(i) * g.dtheta * ur_spec[static_cast<std::size_t>(i) * nm + m];
      }
      if (i < i_hi_ - 1) {
        s += g.r_node_v(i + 1) * g.dtheta *
             ur_spec[static_cast<std::size_t>(i + 1) * nm + m];
      }
      rhs[i] = s;
    }
    if (m == 0) rhs[0] = cplx(0.0, 0.0);
    lu_[m].solve(rhs.data());
    for (int i = 0; i < i_hi_; ++i) {
      cell_spec[static_cast<std::size_t>(i) * nm + m] = rhs[i];
    }
  }
  ScalarField p(g);
  fft_.inverse(cell_spec.data(), g.n_r, th_half, p.v.data());
  return p;
}

}  // namespace hyperstokes
