// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/chart.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperstokes {

namespace {
void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}
}  // namespace

DomainSpec::DomainSpec(double a_, double R0_) : a(a_), R0(R0_) {
  require_finite(a, "curvature parameter a");
  require_finite(R0, "obstacle radius R0");
  if (a <= 0.0) throw std::invalid_argument("curvature parameter a must be > 0");
  if (R0 <= 0.0) throw std::invalid_argument("obstacle radius R0 must be > 0");
}

DiskRadius DiskRadius::from_value(double r) {
  require_finite(r, "disk radius");
  if (r < 0.0 || r >= 1.0) {
    throw std::invalid_argument("disk radius must lie in [0,1)");
  }
  return DiskRadius{r, 1.0 - r};
}

DiskRadius DiskRadius::from_log(double t) {
  require_finite(t, "log disk radius");
  if (t > 0.0) throw std::invalid_argument("log disk radius must be <= 0");
  return DiskRadius{std::exp(t), -std::expm1(t)};
}

DiskRadius geodesic_to_disk(double a, double R) {
  require_finite(a, "curvature parameter a");
  require_finite(R, "geodesic radius");
  if (a <= 0.0) throw std::invalid_argument("curvature parameter a must be > 0");
  if (R < 0.0) throw std::invalid_argument("geodesic radius must be >= 0");
  const double x = 0.5 * a * R;
  // tanh(x) = (1-e^{-2x})/(1+e^{-2x}); the complement 2e^{-2x}/(1+e^{-2x})
  // stays fully accurate as x grows.
  const double e = std::exp(-2.0 * x);
  return DiskRadius{-std::expm1(-2.0 * x) / (1.0 + e), 2.0 * e / (1.0 + e)};
}

double disk_to_geodesic(double a, const DiskRadius& y) {
  if (a <= 0.0) throw std::invalid_argument("curvature parameter a must be > 0");
  if (y.one_minus <= 0.0) {
    throw std::invalid_argument("disk radius at or beyond the ideal boundary");
  }
  return (std::log1p(y.r) - std::log(y.one_minus)) / a;
}

double disk_to_geodesic(double a, double r) {
  return disk_to_geodesic(a, DiskRadius::from_value(r));
}

DiskChart::DiskChart(double a_) : a(a_) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("curvature parameter a must be > 0");
  }
}

double DiskChart::conformal_factor(double abs_y) const {
  const DiskRadius y = DiskRadius::from_value(abs_y);
  return 2.0 / (a * y.one_minus_sq());
}

double DiskChart::pairing_weight(double abs_y) const {
  return weights(abs_y).pairing;
}

double DiskChart::volume_weight(double abs_y) const {
  return weights(abs_y).volume;
}

ConformalWeights DiskChart::weights(double abs_y) const {
  return weights(DiskRadius::from_value(abs_y));
}

ConformalWeights DiskChart::weights(const DiskRadius& y) const {
  if (y.one_minus <= 0.0) {
    throw std::invalid_argument("conformal weights requested at the ideal boundary");
  }
  const double s = y.one_minus_sq();
  const double pairing = 0.25 * a * a * s * s;
  return ConformalWeights{pairing, 1.0 / pairing};
}

}  // namespace hyperstokes
