// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_SPECTRAL_HPP
#define HYPERSTOKES_SPECTRAL_HPP

#include <complex>
#include <memory>
#include <vector>

#include "hyperstokes/calculus.hpp"
#include "hyperstokes/field.hpp"
#include "hyperstokes/functional.hpp"

namespace hyperstokes {

// The grid is theta-uniform and every operator coefficient is radial, so the
// saddle systems block-diagonalize over angular Fourier modes.  Each mode is
// a banded 1D system solved directly; residuals come out at rounding level
// and runs are bit-reproducible.

// FFT along theta with phase anchoring: spectra are coefficients w.r.t.
// exp(i m theta) at absolute angles, so staggered families combine with
// plain multipliers 2i sin(m dtheta/2) (centered difference) and
// cos(m dtheta/2) (two-point average).
class ThetaFFT {
 public:
  explicit ThetaFFT(int n_th);
  ~ThetaFFT();
  ThetaFFT(const ThetaFFT&) = delete;
  ThetaFFT& operator=(const ThetaFFT&) = delete;

  int n_th() const { return n_th_; }
  int modes() const { return n_th_ / 2 + 1; }

  // data: rows x n_th row-major; spec: rows x modes.  theta0 is the angle of
  // sample j = 0 of this family.
  void forward(const double* data, int rows, double theta0,
               std::complex<double>* spec) const;
  void inverse(const std::complex<double>* spec, int rows, double theta0,
               double* data) const;

 private:
  int n_th_;
  void* fwd_ = nullptr;  // fftw plans
  void* inv_ = nullptr;
  mutable std::vector<double> rbuf_;
  mutable std::vector<std::complex<double>> cbuf_;
};

// General banded complex LU (LAPACK zgbtrf/zgbtrs).
class BandedComplexLU {
 public:
  BandedComplexLU(int n, int kl, int ku);

  void add(int i, int j, std::complex<double> v);
  void set(int i, int j, std::complex<double> v);
  void zero_row(int i);
  void factor();
  void solve(std::complex<double>* rhs) const;  // in place
  int size() const { return n_; }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<std::complex<double>> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

// Direct solver for the saddle systems
//   K w + B^H p = t,   B w = g
// on the cell band [i_lo, i_hi), with w vanishing on the band walls.  K is
// the quadratic form selected by OperatorKind; B is the integrated staggered
// divergence.  The mean multiplier mode is pinned (the compatible m = 0
// block determines p only up to a constant).
class SpectralSaddleSolver {
 public:
  SpectralSaddleSolver(const AnnulusGrid& g, const OperatorKind& kind,
                       int i_lo = 0, int i_hi = -1);

  void solve(const WeakFunctional& rhs_dual, const ScalarField& rhs_div,
             OneFormField& w, ScalarField& p) const;

  // Riesz dual norm of a functional over the discretely divergence-free
  // zero-boundary subspace: sqrt(<l, z>) with K z + B^H q = l, B z = 0.
  double dual_norm(const WeakFunctional& l) const;

  int band_lo() const { return i_lo_; }
  int band_hi() const { return i_hi_; }

 private:
  const AnnulusGrid* g_;
  OperatorKind kind_;
  int i_lo_, i_hi_, nb_, nvar_;
  ThetaFFT fft_;
  std::vector<BandedComplexLU> lu_;

  int idx_uth(int k) const { return 3 * k; }
  int idx_p(int k) const { return 3 * k + 1; }
  int idx_ur(int k) const { return 3 * k + 2; }  // node i_lo + k + 1
  void assemble();
};

// Direct solver for the unconstrained SPD form K w = t on the band, same
// conventions (used by the probe sweeps and as a smooth inverse).
class SpectralDirichletSolver {
 public:
  SpectralDirichletSolver(const AnnulusGrid& g, const OperatorKind& kind,
                          int i_lo = 0, int i_hi = -1);
  void solve(const WeakFunctional& rhs_dual, OneFormField& w) const;

 private:
  const AnnulusGrid* g_;
  OperatorKind kind_;
  int i_lo_, i_hi_, nb_, nvar_;
  ThetaFFT fft_;
  std::vector<BandedComplexLU> lu_;

  int idx_uth(int k) const { return 2 * k; }
  int idx_ur(int k) const { return 2 * k + 1; }
  void assemble();
};

// Least-squares recovery of a cell multiplier from a face dual vector:
// minimizes || B^H p - l ||_2 over the faces interior to [0, i_hi).  The
// gauge constant is pinned; callers renormalize.
class SpectralPressureRecovery {
 public:
  SpectralPressureRecovery(const AnnulusGrid& g, int i_hi);
  ScalarField solve(const WeakFunctional& l) const;

 private:
  const AnnulusGrid* g_;
  int i_hi_;
  ThetaFFT fft_;
  std::vector<BandedComplexLU> lu_;
};

}  // namespace hyperstokes

#endif
