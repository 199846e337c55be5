#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hyperstokes/field.hpp"
#include "hyperstokes/grid.hpp"
#include "oracles.hpp"

using namespace hyperstokes;

namespace {
AnnulusGrid standard_grid(int n_r = 48, int n_th = 96) {
  return build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, n_r, n_th);
}
}  // namespace

TEST_CASE("grid radii come from the radius map") {
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 8.0, 64, 128);
  CHECK(g.rad_node.front().r == doctest::Approx(oracles::tanh_ref(0.5)).epsilon(1e-14));
  CHECK(g.rad_node.back().r == doctest::Approx(oracles::tanh_ref(4.0)).epsilon(1e-14));
  CHECK(g.n_r == 64);
  CHECK(g.n_th == 128);
}

TEST_CASE("degenerate and invalid grids are rejected") {
  CHECK_THROWS_AS(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 1.0, 64, 128),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 4, 128),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 64, 15),
                  std::invalid_argument);
  // under-resolved cutoff transition band
  CHECK_THROWS_AS(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 60.0, 8, 16),
                  std::invalid_argument);
  // cell guard
  CHECK_THROWS_AS(build_annulus_grid(DomainSpec(1.0, 1.0), 1.0, 9.0, 8192, 4096),
                  std::invalid_argument);
}

TEST_CASE("quadrature weights sum to the annulus area") {
  const AnnulusGrid g = standard_grid();
  double total = 0.0;
  for (int i = 0; i < g.n_r; ++i) total += g.cell_area[i] * g.n_th;
  const double r0 = g.rad_node.front().r, r1 = g.rad_node.back().r;
  const double exact = std::numbers::pi * (r1 * r1 - r0 * r0);
  CHECK(total == doctest::Approx(exact).epsilon(1e-12));

  // dual tilings cover the same area
  double rsum = 0.0, vsum = 0.0;
  for (int i = 0; i <= g.n_r; ++i) {
    rsum += g.rface_area[i] * g.n_th;
    vsum += g.vertex_area[i] * g.n_th;
  }
  CHECK(rsum == doctest::Approx(exact).epsilon(1e-12));
  CHECK(vsum == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("integrate: euclidean annulus area and zero field") {
  // annulus tanh(0.5) .. tanh(1), a = 1
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 0.25), 1.0, 2.0, 64, 64);
  const ScalarField one = sample_cells(g, [](double, double) { return 1.0; });
  const double t0 = oracles::tanh_ref(0.5), t1 = oracles::tanh_ref(1.0);
  const double exact = std::numbers::pi * (t1 * t1 - t0 * t0);
  CHECK(integrate(one, Measure::euclidean) == doctest::Approx(exact).epsilon(1e-12));
  const ScalarField zero = sample_cells(g, [](double, double) { return 0.0; });
  CHECK(integrate(zero, Measure::euclidean) == 0.0);
  CHECK(integrate(zero, Measure::hyperbolic) == 0.0);
}

TEST_CASE("gradient of Re z has unit energy density") {
  // |grad F|^2 = 1 for F = Re z, so the euclidean integral is the area
  const AnnulusGrid g = standard_grid();
  const ScalarField one = sample_cells(g, [](double, double) { return 1.0; });
  const double area = integrate(one, Measure::euclidean);
  const double r0 = g.rad_node.front().r, r1 = g.rad_node.back().r;
  CHECK(area == doctest::Approx(std::numbers::pi * (r1 * r1 - r0 * r0)).epsilon(1e-12));
}

TEST_CASE("refinement doubles, nests, and preserves totals") {
  const AnnulusGrid g = standard_grid(32, 64);
  const AnnulusGrid f = refine(g);
  CHECK(f.n_r == 64);
  CHECK(f.n_th == 128);
  for (int i = 0; i <= g.n_r; ++i) {
    CHECK(f.t_node[2 * i] == doctest::Approx(g.t_node[i]).epsilon(1e-14));
  }
  double tg = 0.0, tf = 0.0;
  for (int i = 0; i < g.n_r; ++i) tg += g.cell_area[i] * g.n_th;
  for (int i = 0; i < f.n_r; ++i) tf += f.cell_area[i] * f.n_th;
  CHECK(tf == doctest::Approx(tg).epsilon(1e-12));
}

TEST_CASE("midpoint quadrature converges at second order on smooth fields") {
  auto f = [](double r, double) { return std::cos(3.0 * r); };
  const AnnulusGrid g1 = standard_grid(32, 32);
  const AnnulusGrid g2 = refine(g1);
  const AnnulusGrid g3 = refine(g2);
  const double exact = oracles::integrate_1d(
      [](double r) { return std::cos(3.0 * r) * r; }, g1.rad_node.front().r,
      g1.rad_node.back().r, 512) * 2.0 * std::numbers::pi;
  const double e1 = std::fabs(integrate(sample_cells(g1, f), Measure::euclidean) - exact);
  const double e2 = std::fabs(integrate(sample_cells(g2, f), Measure::euclidean) - exact);
  const double e3 = std::fabs(integrate(sample_cells(g3, f), Measure::euclidean) - exact);
  const double order12 = std::log2(e1 / e2);
  const double order23 = std::log2(e2 / e3);
  CHECK(order12 > 1.9);
  CHECK(order12 < 2.2);
  CHECK(order23 > 1.9);
  CHECK(order23 < 2.2);
}

TEST_CASE("node classification partitions the radial index range") {
  const AnnulusGrid g = standard_grid();
  int inner = 0, outer = 0, interior = 0;
  for (int i = 0; i <= g.n_r; ++i) {
    switch (g.node_kind(i)) {
      case NodeKind::inner_boundary: ++inner; break;
      case NodeKind::outer_boundary: ++outer; break;
      case NodeKind::interior: ++interior; break;
    }
  }
  CHECK(inner == 1);
  CHECK(outer == 1);
  CHECK(interior == g.n_r - 1);
}

TEST_CASE("aspect ratio is uniform and recorded") {
  const AnnulusGrid g = standard_grid(48, 96);
  // geometric grading: every cell has the same log-radial to angular ratio
  for (int i = 0; i + 1 < g.n_r; ++i) {
    const double d0 = g.t_node[i + 1] - g.t_node[i];
    const double d1 = g.t_node[i + 2] - g.t_node[i + 1];
    CHECK(d0 == doctest::Approx(d1).epsilon(1e-10));
  }
  CHECK(g.aspect_ratio ==
        doctest::Approx((g.t_node[1] - g.t_node[0]) / g.dtheta).epsilon(1e-12));
}

TEST_CASE("csv dump format") {
  // small grid; the cutoff band lies outside this domain
  const AnnulusGrid g = build_annulus_grid(DomainSpec(1.0, 5.0), 1.0, 9.0, 8, 16);
  const ScalarField f = sample_cells(g, [](double r, double th) { return r * th; });
  std::ostringstream os;
  dump_csv(os, f);
  const std::string s = os.str();
  CHECK(s.substr(0, 17) == "r,theta,y1,y2,c1\n");
  CHECK(s.find("\r\n") == std::string::npos);  // LF endings
  // row count: header + cells
  int rows = 0;
  for (char ch : s) rows += ch == '\n' ? 1 : 0;
  CHECK(rows == 1 + g.cells());
}
