// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_PROBES_HPP
#define HYPERSTOKES_PROBES_HPP

#include <cstdint>
#include <random>

#include "hyperstokes/field.hpp"

namespace hyperstokes {

// Deterministic smooth random fields for the inequality sweeps and property
// tests.  Profiles are low-order trigonometric combinations under a radial
// bump that vanishes (with its derivative) at both walls.

/// Smooth zero-boundary 1-form with independent random components.
OneFormField random_zero_boundary(const AnnulusGrid& g, std::mt19937_64& rng,
                                  int max_mode = 6);

/// Exactly divergence-free zero-boundary probe (discrete curl of a random
/// vertex stream potential).
OneFormField random_divfree(const AnnulusGrid& g, std::mt19937_64& rng,
                            int max_mode = 6);

/// Random vertex stream potential vanishing to first order at the walls.
VertexField random_stream(const AnnulusGrid& g, std::mt19937_64& rng,
                          int max_mode = 6);

}  // namespace hyperstokes

#endif
