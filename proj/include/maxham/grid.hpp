#ifndef MAXHAM_GRID_HPP
#define MAXHAM_GRID_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxham {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform collocated periodic grid. Cell (i,j,k) sits at x = (i*dx, j*dy, k*dz),
// domain [0, n*dx) per axis.
struct GridSpec {
  std::array<int, 3> n{};
  std::array<double, 3> dx{};

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (n[a] < 4)
        throw GridError("grid.n must be >= 4 on every axis (stencil width), got " +
                        std::to_string(n[a]) + " on axis " + std::to_string(a));
      if (!(dx[a] > 0.0))
        throw GridError("grid.dx must be positive on every axis");
    }
  }

  std::size_t cells() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  double cell_volume() const { return dx[0] * dx[1] * dx[2]; }
  double length(int axis) const { return n[axis] * dx[axis]; }
  double coord(int axis, int idx) const { return dx[axis] * idx; }
  double min_dx() const { return std::min(dx[0], std::min(dx[1], dx[2])); }

  bool operator==(const GridSpec&) const = default;
};

// Scalar field sampled on a GridSpec, C-order (i slowest, k fastest).
class Field {
 public:
  Field() = default;
  explicit Field(const GridSpec& g) : grid_(g), v_(g.cells(), 0.0) {}

  double& at(int i, int j, int k) {
    return v_[(static_cast<std::size_t>(i) * grid_.n[1] + j) * grid_.n[2] + k];
  }
  double at(int i, int j, int k) const {
    return v_[(static_cast<std::size_t>(i) * grid_.n[1] + j) * grid_.n[2] + k];
  }

  // Periodic accessor, offsets in [-n, n].
  double pa(int i, int j, int k) const {
    const auto& n = grid_.n;
    i += n[0]; j += n[1]; k += n[2];
    return at(i % n[0], j % n[1], k % n[2]);
  }

  const GridSpec& grid() const { return grid_; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  GridSpec grid_{};
  std::vector<double> v_;
};

using Field3 = std::array<Field, 3>;

// Second-order central difference along `axis`, periodic wrap.
inline double ddx(const Field& f, int axis, int i, int j, int k) {
  const auto& g = f.grid();
  int o[3] = {0, 0, 0};
  o[axis] = 1;
  return (f.pa(i + o[0], j + o[1], k + o[2]) - f.pa(i - o[0], j - o[1], k - o[2])) /
         (2.0 * g.dx[axis]);
}

template <class Fn>
void for_cells(const GridSpec& g, Fn&& fn) {
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) fn(i, j, k);
}

inline double max_abs3(const Field3& f) {
  return std::max(f[0].max_abs(), std::max(f[1].max_abs(), f[2].max_abs()));
}

}  // namespace maxham

#endif
