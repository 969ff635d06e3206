#include <doctest.h>

#include <cmath>
#include <random>

#include "maxham/geometry.hpp"
#include "maxham/grid.hpp"

using namespace maxham;

namespace {

GridSpec cube(int n) { return GridSpec{{n, n, n}, {1.0 / n, 1.0 / n, 1.0 / n}}; }

Mat4 antisym_from(double f01, double f02, double f03, double f12, double f13,
                  double f23) {
  Mat4 F = Mat4::Zero();
  F(0, 1) = f01; F(0, 2) = f02; F(0, 3) = f03;
  F(1, 2) = f12; F(1, 3) = f13; F(2, 3) = f23;
  F -= Mat4(F.transpose()).eval();
  return F;
}

}  // namespace

TEST_CASE("grid spec validation") {
  GridSpec g = cube(8);
  CHECK_NOTHROW(g.validate());
  g.n[1] = 3;
  CHECK_THROWS_AS(g.validate(), GridError);
  g = cube(8);
  g.dx[2] = 0.0;
  CHECK_THROWS_AS(g.validate(), GridError);
  CHECK(cube(4).cells() == 64);
  CHECK(cube(8).length(0) == doctest::Approx(1.0));
}

TEST_CASE("central difference is second order on a periodic sinusoid") {
  double err[2];
  int m = 0;
  for (int n : {16, 32}) {
    GridSpec g = cube(n);
    Field f(g);
    for_cells(g, [&](int i, int j, int k) {
      f.at(i, j, k) = std::sin(2.0 * M_PI * g.coord(0, i));
    });
    double worst = 0.0;
    for_cells(g, [&](int i, int j, int k) {
      const double exact = 2.0 * M_PI * std::cos(2.0 * M_PI * g.coord(0, i));
      worst = std::max(worst, std::abs(ddx(f, 0, i, j, k) - exact));
    });
    err[m++] = worst;
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("sqrt_minus_g on diagonal metrics") {
  GridSpec g = cube(4);
  CHECK(SpacetimeMetric::minkowski().sqrt_minus_g(g, 0, 0, 0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(SpacetimeMetric::diagonal({1, -4, -1, -1}).sqrt_minus_g(g, 1, 2, 3) ==
        doctest::Approx(2.0).epsilon(1e-14));
  // spherical-like diag(1,-1,-r^2,-r^2 sin^2 th) at r=2, th=pi/2
  Mat4 sph = Mat4::Zero();
  sph.diagonal() << 1.0, -1.0, -4.0, -4.0;
  CHECK(SpacetimeMetric::constant(sph).sqrt_minus_g(g, 0, 0, 0) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("spatial_det and the sqrt(g00) split") {
  GridSpec g = cube(4);
  CHECK(SpacetimeMetric::minkowski().spatial_det(g, 0, 0, 0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(SpacetimeMetric::diagonal({1, -4, -1, -1}).spatial_det(g, 0, 0, 0) ==
        doctest::Approx(4.0).epsilon(1e-14));
  const auto m = SpacetimeMetric::diagonal({4, -1, -1, -1});
  CHECK(m.spatial_det(g, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.sqrt_minus_g(g, 0, 0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("non-Lorentzian metrics are rejected") {
  CHECK_THROWS_AS(SpacetimeMetric::diagonal({-1, -1, -1, -1}),
                  NonLorentzianMetric);
  CHECK_THROWS_AS(SpacetimeMetric::diagonal({1, 1, -1, -1}), NonLorentzianMetric);
  Mat4 bad = Mat4::Identity();
  CHECK_THROWS_AS(SpacetimeMetric::constant(bad), NonLorentzianMetric);
}

TEST_CASE("raise_antisym on reference entries") {
  GridSpec g = cube(4);
  const Mat4 up_mink = SpacetimeMetric::minkowski().upper(g, 0, 0, 0);

  const double E = 0.7, B = -1.3;
  Mat4 F = antisym_from(E, 0, 0, B, 0, 0);
  Mat4 Fu = raise_antisym(up_mink, F);
  CHECK(Fu(0, 1) == doctest::Approx(-E).epsilon(1e-14));
  CHECK(Fu(1, 2) == doctest::Approx(B).epsilon(1e-14));

  const Mat4 up_stretch = SpacetimeMetric::diagonal({1, -4, -1, -1}).upper(g, 0, 0, 0);
  Mat4 F01 = antisym_from(1, 0, 0, 0, 0, 0);
  CHECK(raise_antisym(up_stretch, F01)(0, 1) ==
        doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("raise then lower is the identity; Minkowski entrywise rules") {
  GridSpec g = cube(4);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto mink = SpacetimeMetric::minkowski();
  const auto curved = SpacetimeMetric::diag_profile(0.3, {1, 1, 1});

  for (int trial = 0; trial < 50; ++trial) {
    Mat4 F = antisym_from(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    for (const auto* metric : {&mink, &curved}) {
      const int i = trial % 4, j = (trial / 4) % 4, k = trial % 3;
      const Mat4 gu = metric->upper(g, i, j, k);
      const Mat4 gl = metric->lower(g, i, j, k);
      const Mat4 back = lower_antisym(gl, raise_antisym(gu, F));
      CHECK((back - F).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Mat4 Fu = raise_antisym(mink.upper(g, 0, 0, 0), F);
    for (int a = 1; a < 4; ++a) {
      CHECK(Fu(0, a) == doctest::Approx(-F(0, a)).epsilon(1e-14));
      for (int b = a + 1; b < 4; ++b)
        CHECK(Fu(a, b) == doctest::Approx(F(a, b)).epsilon(1e-14));
    }
  }
}

TEST_CASE("sqrt(-g) = sqrt(g00) sqrt(3g) across families") {
  GridSpec g = cube(8);
  const auto profile = SpacetimeMetric::diag_profile(0.25, {1, 1, 1});
  const auto stretch = SpacetimeMetric::diagonal({2.25, -4, -9, -1});
  for (const auto* m : {&profile, &stretch}) {
    for_cells(g, [&](int i, int j, int k) {
      const double lhs = m->sqrt_minus_g(g, i, j, k);
      const double rhs = std::sqrt(m->lower(g, i, j, k)(0, 0)) *
                         std::sqrt(m->spatial_det(g, i, j, k));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    });
  }
}

TEST_CASE("metric cache momentum lowering") {
  GridSpec g = cube(4);
  MetricCache flat(SpacetimeMetric::minkowski(), g);
  auto low = flat.lower_momentum({1.0, -2.0, 0.5}, 0, 0, 0);
  CHECK(low[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(low[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(low[2] == doctest::Approx(-0.5).epsilon(1e-14));

  // p_i = g_00 g_ij p^j
  MetricCache m(SpacetimeMetric::diagonal({4, -9, -1, -1}), g);
  auto low2 = m.lower_momentum({2.0, 0.0, 0.0}, 1, 2, 3);
  CHECK(low2[0] == doctest::Approx(4.0 * -9.0 * 2.0).epsilon(1e-14));
}

TEST_CASE("diag_profile samples the printed profile") {
  GridSpec g = cube(8);
  const double eps = 0.2;
  const auto m = SpacetimeMetric::diag_profile(eps, {1, 1, 1});
  const int i = 3;
  const double h = 1.0 + eps * std::sin(2.0 * M_PI * g.coord(0, i));
  CHECK(m.lower(g, i, 0, 0)(1, 1) == doctest::Approx(-h * h).epsilon(1e-13));
  CHECK(m.lower(g, i, 0, 0)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(SpacetimeMetric::diag_profile(1.5, {1, 1, 1}),
                  NonLorentzianMetric);
}
