#ifndef MAXHAM_GEOMETRY_HPP
#define MAXHAM_GEOMETRY_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "maxham/grid.hpp"

namespace maxham {

using Mat4 = Eigen::Matrix4d;

struct NonLorentzianMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Static block-diagonal 4-metric g_{ab}, signature (+,-,-,-), g_{0i} = 0.
// Either a global constant matrix or one of the built-in coordinate-dependent
// families sampled per cell.
class SpacetimeMetric {
 public:
  enum class Family { minkowski, diag_const, diag_profile };

  static SpacetimeMetric minkowski();
  // Constant diagonal metric diag(d0, d1, d2, d3); d0 > 0, di < 0 required.
  static SpacetimeMetric diagonal(const std::array<double, 4>& d);
  // Constant block-diagonal metric from an explicit symmetric matrix.
  static SpacetimeMetric constant(const Mat4& g);
  // g_00 = 1, g_ii = -(1 + eps*sin(2*pi*x_i/L_i))^2, coordinate-dependent
  // diagonal family ("diag_profile"). Requires |eps| < 1.
  static SpacetimeMetric diag_profile(double eps, const std::array<double, 3>& length);

  Family family() const { return family_; }
  double profile_eps() const { return eps_; }
  const std::array<double, 3>& profile_length() const { return length_; }
  bool is_constant() const { return family_ != Family::diag_profile; }

  // g_{ab} at a grid cell.
  Mat4 lower(const GridSpec& grid, int i, int j, int k) const;
  // g^{ab} at a grid cell.
  Mat4 upper(const GridSpec& grid, int i, int j, int k) const;

  double sqrt_minus_g(const GridSpec& grid, int i, int j, int k) const;
  // 3g = |det of the spatial 3x3 block|.
  double spatial_det(const GridSpec& grid, int i, int j, int k) const;

 private:
  SpacetimeMetric() = default;
  void check_lorentzian(const Mat4& g) const;

  Family family_ = Family::minkowski;
  Mat4 g_const_ = Mat4::Identity();
  double eps_ = 0.0;
  std::array<double, 3> length_{1.0, 1.0, 1.0};
};

// F^{ab} = g^{ac} g^{bd} F_{cd}; upper triangle computed, lower mirrored so
// antisymmetry is exact.
Mat4 raise_antisym(const Mat4& g_upper, const Mat4& F_lower);
// Inverse operation, same mirroring.
Mat4 lower_antisym(const Mat4& g_lower, const Mat4& F_upper);

// Per-cell geometric quantities materialized once per run.
struct MetricCache {
  GridSpec grid;
  Field sqrtg;    // sqrt(-det g)
  Field sqrt3g;   // sqrt(3g)
  Field g00;      // g_{00}
  Field inv_g00;  // g^{00}
  // Spatial block g_{ij} and its inverse g^{ij} (block-diagonal metric), as
  // six symmetric components xx,xy,xz,yy,yz,zz.
  std::array<Field, 6> gsp;
  std::array<Field, 6> gsp_inv;

  MetricCache(const SpacetimeMetric& m, const GridSpec& g);

  // p_i = g_{00} g_{ij} p^j (spatial lowering used by the printed formulas).
  std::array<double, 3> lower_momentum(const std::array<double, 3>& p_up, int i,
                                       int j, int k) const;
  Mat4 lower_at(int i, int j, int k) const;
  Mat4 upper_at(int i, int j, int k) const;
};

}  // namespace maxham

#endif
