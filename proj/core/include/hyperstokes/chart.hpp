// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_CHART_HPP
#define HYPERSTOKES_CHART_HPP

namespace hyperstokes {

// Parameters of the exterior-domain problem on the hyperbolic plane of
// curvature -a^2.  The obstacle is the geodesic ball of radius R0 about the
// base point; viscosity is fixed to 1.
struct DomainSpec {
  double a;
  double R0;
  double mu = 1.0;

  DomainSpec(double a_, double R0_);
};

// Disk radius together with its complement 1-r.  A bare double loses all
// relative precision in 1-r once r is within a few ulps of 1, and the
// geodesic radius is a function of 1-r; carrying the complement keeps the
// radius <-> geodesic round trip accurate out to large geodesic radii.
struct DiskRadius {
  double r = 0.0;
  double one_minus = 1.0;

  static DiskRadius from_value(double r);
  // r = exp(t), t <= 0.  one_minus = -expm1(t) keeps full precision.
  static DiskRadius from_log(double t);

  double one_minus_sq() const { return one_minus * (1.0 + r); }  // 1 - r^2
};

/// r = tanh(aR/2); the geodesic ball of radius R maps onto the Euclidean
/// disk of radius r.
DiskRadius geodesic_to_disk(double a, double R);

/// R = (1/a) log((1+r)/(1-r)); inverse of geodesic_to_disk.
double disk_to_geodesic(double a, const DiskRadius& r);
double disk_to_geodesic(double a, double r);

struct ConformalWeights {
  double pairing;  // a^2 (1-|y|^2)^2 / 4, contracts 1-form components
  double volume;   // 4 / (a^2 (1-|y|^2)^2), the area density vs. Lebesgue
};

// The standard disk chart: metric = conformal_factor^2 * (Euclidean).
struct DiskChart {
  double a;

  explicit DiskChart(double a_);

  double conformal_factor(double abs_y) const;            // 2/(a(1-|y|^2))
  double pairing_weight(double abs_y) const;
  double volume_weight(double abs_y) const;
  ConformalWeights weights(double abs_y) const;
  ConformalWeights weights(const DiskRadius& y) const;    // stable near |y|=1
};

}  // namespace hyperstokes

#endif
