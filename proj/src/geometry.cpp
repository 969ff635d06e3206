#include "maxham/geometry.hpp"

#include <cmath>

namespace maxham {

SpacetimeMetric SpacetimeMetric::minkowski() {
  SpacetimeMetric m;
  m.family_ = Family::minkowski;
  Mat4 g = Mat4::Zero();
  g.diagonal() << 1.0, -1.0, -1.0, -1.0;
  m.g_const_ = g;
  return m;
}

SpacetimeMetric SpacetimeMetric::diagonal(const std::array<double, 4>& d) {
  Mat4 g = Mat4::Zero();
  for (int a = 0; a < 4; ++a) g(a, a) = d[a];
  return constant(g);
}

SpacetimeMetric SpacetimeMetric::constant(const Mat4& g) {
  SpacetimeMetric m;
  m.family_ = Family::diag_const;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw NonLorentzianMetric("metric matrix must be exactly symmetric");
  for (int i = 1; i < 4; ++i)
    if (g(0, i) != 0.0)
      throw NonLorentzianMetric("metric must be block-diagonal (g_{0i} = 0)");
  m.check_lorentzian(g);
  m.g_const_ = g;
  return m;
}

SpacetimeMetric SpacetimeMetric::diag_profile(double eps,
                                              const std::array<double, 3>& length) {
  if (!(std::abs(eps) < 1.0))
    throw NonLorentzianMetric("diag_profile requires |eps| < 1");
  SpacetimeMetric m;
  m.family_ = Family::diag_profile;
  m.eps_ = eps;
  m.length_ = length;
  return m;
}

void SpacetimeMetric::check_lorentzian(const Mat4& g) const {
  if (!(g.determinant() < 0.0))
    throw NonLorentzianMetric("det g must be negative");
  if (!(g(0, 0) > 0.0))
    throw NonLorentzianMetric("g_{00} must be positive for signature (+,-,-,-)");
}

Mat4 SpacetimeMetric::lower(const GridSpec& grid, int i, int j, int k) const {
  if (is_constant()) return g_const_;
  Mat4 g = Mat4::Zero();
  g(0, 0) = 1.0;
  const int idx[3] = {i, j, k};
  for (int a = 0; a < 3; ++a) {
    const double x = grid.coord(a, idx[a]);
    const double h = 1.0 + eps_ * std::sin(2.0 * M_PI * x / length_[a]);
    g(a + 1, a + 1) = -h * h;
  }
  return g;
}

Mat4 SpacetimeMetric::upper(const GridSpec& grid, int i, int j, int k) const {
  const Mat4 g = lower(grid, i, j, k);
  return g.inverse();
}

double SpacetimeMetric::sqrt_minus_g(const GridSpec& grid, int i, int j, int k) const {
  const double det = lower(grid, i, j, k).determinant();
  if (!(det < 0.0)) throw NonLorentzianMetric("det g must be negative");
  return std::sqrt(-det);
}

double SpacetimeMetric::spatial_det(const GridSpec& grid, int i, int j, int k) const {
  const Mat4 g = lower(grid, i, j, k);
  if (!(g.determinant() < 0.0)) throw NonLorentzianMetric("det g must be negative");
  const double det3 = g.block<3, 3>(1, 1).determinant();
  return std::abs(det3);
}

Mat4 raise_antisym(const Mat4& g_upper, const Mat4& F_lower) {
  Mat4 up = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) s += g_upper(a, c) * g_upper(b, d) * F_lower(c, d);
      up(a, b) = s;
      up(b, a) = -s;
    }
  return up;
}

Mat4 lower_antisym(const Mat4& g_lower, const Mat4& F_upper) {
  return raise_antisym(g_lower, F_upper);
}

MetricCache::MetricCache(const SpacetimeMetric& m, const GridSpec& g) : grid(g) {
  grid.validate();
  sqrtg = Field(g);
  sqrt3g = Field(g);
  g00 = Field(g);
  inv_g00 = Field(g);
  for (auto& f : gsp) f = Field(g);
  for (auto& f : gsp_inv) f = Field(g);
  static const int rows[6] = {0, 0, 0, 1, 1, 2};
  static const int cols[6] = {0, 1, 2, 1, 2, 2};
  for_cells(g, [&](int i, int j, int k) {
    const Mat4 gl = m.lower(g, i, j, k);
    const double det = gl.determinant();
    if (!(det < 0.0)) throw NonLorentzianMetric("det g must be negative");
    sqrtg.at(i, j, k) = std::sqrt(-det);
    sqrt3g.at(i, j, k) = std::sqrt(std::abs(gl.block<3, 3>(1, 1).determinant()));
    g00.at(i, j, k) = gl(0, 0);
    inv_g00.at(i, j, k) = 1.0 / gl(0, 0);
    const Eigen::Matrix3d sp = gl.block<3, 3>(1, 1);
    const Eigen::Matrix3d spi = sp.inverse();
    for (int c = 0; c < 6; ++c) {
      gsp[c].at(i, j, k) = sp(rows[c], cols[c]);
      gsp_inv[c].at(i, j, k) = spi(rows[c], cols[c]);
    }
  });
}

std::array<double, 3> MetricCache::lower_momentum(const std::array<double, 3>& p_up,
                                                  int i, int j, int k) const {
  const double c00 = g00.at(i, j, k);
  const double xx = gsp[0].at(i, j, k), xy = gsp[1].at(i, j, k),
               xz = gsp[2].at(i, j, k), yy = gsp[3].at(i, j, k),
               yz = gsp[4].at(i, j, k), zz = gsp[5].at(i, j, k);
  return {c00 * (xx * p_up[0] + xy * p_up[1] + xz * p_up[2]),
          c00 * (xy * p_up[0] + yy * p_up[1] + yz * p_up[2]),
          c00 * (xz * p_up[0] + yz * p_up[1] + zz * p_up[2])};
}

Mat4 MetricCache::lower_at(int i, int j, int k) const {
  Mat4 g = Mat4::Zero();
  g(0, 0) = g00.at(i, j, k);
  static const int rows[6] = {0, 0, 0, 1, 1, 2};
  static const int cols[6] = {0, 1, 2, 1, 2, 2};
  for (int c = 0; c < 6; ++c) {
    g(rows[c] + 1, cols[c] + 1) = gsp[c].at(i, j, k);
    g(cols[c] + 1, rows[c] + 1) = gsp[c].at(i, j, k);
  }
  return g;
}

Mat4 MetricCache::upper_at(int i, int j, int k) const {
  Mat4 g = Mat4::Zero();
  g(0, 0) = inv_g00.at(i, j, k);
  static const int rows[6] = {0, 0, 0, 1, 1, 2};
  static const int cols[6] = {0, 1, 2, 1, 2, 2};
  for (int c = 0; c < 6; ++c) {
    g(rows[c] + 1, cols[c] + 1) = gsp_inv[c].at(i, j, k);
    g(cols[c] + 1, rows[c] + 1) = gsp_inv[c].at(i, j, k);
  }
  return g;
}

}  // namespace maxham
