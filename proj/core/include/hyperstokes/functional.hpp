// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_FUNCTIONAL_HPP
#define HYPERSTOKES_FUNCTIONAL_HPP

#include <string>

#include "hyperstokes/field.hpp"

namespace hyperstokes {

// A discrete dual vector: <L, phi> = sum_f fur[f] phi.ur[f] + futh[f] phi.uth[f].
// Wall r-face entries act on the (pinned) wall normal components and are
// ignored by the solvers.
struct WeakFunctional {
  const AnnulusGrid* grid = nullptr;
  std::vector<double> fur;   // (n_r+1) x n_th
  std::vector<double> futh;  // n_r x n_th
  std::string label;

  WeakFunctional() = default;
  explicit WeakFunctional(const AnnulusGrid& g, std::string lbl = "")
      : grid(&g),
        fur(static_cast<std::size_t>(g.n_r + 1) * g.n_th, 0.0),
        futh(static_cast<std::size_t>(g.n_r) * g.n_th, 0.0),
        label(std::move(lbl)) {}

  double act(const OneFormField& phi) const;
  void axpy(double c, const WeakFunctional& other);
  void scale(double c);
};

}  // namespace hyperstokes

#endif
