#ifndef MAXHAM_MAXWELL_FIELD_HPP
#define MAXHAM_MAXWELL_FIELD_HPP

#include <functional>
#include <optional>

#include "maxham/geometry.hpp"
#include "maxham/grid.hpp"

namespace maxham {

inline constexpr double four_pi = 4.0 * M_PI;

struct Units {
  double c = 1.0;  // speed of light in the chosen CGS-style scale
};

struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical field variables. A0, A_i are covariant potential components;
// p^i is the density-weighted contravariant momentum (includes sqrt(-g));
// p0 is the momentum conjugate to A_0 (the primary-constraint monitor).
struct FieldState {
  GridSpec grid;
  Field A0;
  Field3 A;
  Field p0;
  Field3 p;
  double time = 0.0;

  static FieldState zero(const GridSpec& g) {
    FieldState s;
    s.grid = g;
    s.A0 = Field(g);
    s.p0 = Field(g);
    for (int i = 0; i < 3; ++i) {
      s.A[i] = Field(g);
      s.p[i] = Field(g);
    }
    return s;
  }

  bool finite() const;
};

// Prescribed four-current: rho in charge/volume, j^i contravariant current
// density; j^0 = c*rho. rho_dot is the analytic time derivative, used by the
// continuity check.
struct CurrentSource {
  using CellFn = std::function<double(double t, int i, int j, int k)>;
  CellFn rho;
  CellFn rho_dot;
  std::array<CellFn, 3> ji;
  bool continuity_certified = false;

  static CurrentSource none() {
    CurrentSource s;
    auto zero = [](double, int, int, int) { return 0.0; };
    s.rho = zero;
    s.rho_dot = zero;
    s.ji = {zero, zero, zero};
    s.continuity_certified = true;
    return s;
  }
  bool is_zero_hint = false;
};

// Antisymmetric field tensor per cell, six independent components in the
// order 01, 02, 03, 12, 13, 23.
struct FieldTensor {
  GridSpec grid;
  std::array<Field, 6> lower;
  std::array<Field, 6> upper;

  static int comp(int a, int b);  // a < b
  Mat4 lower_at(int i, int j, int k) const;
  Mat4 upper_at(int i, int j, int k) const;
};

struct FieldDeriv {
  Field A0_dot;
  Field3 A_dot;
  Field p0_dot;
  Field3 p_dot;
};

// Velocity map: Adot_i = -(4 pi c^3/sqrt(-g)) p_i + c d_i A0.
Field3 velocities_from_momenta(const FieldState& state, const MetricCache& mc,
                               const Units& u);

// Inverse map: canonical p^i from prescribed Adot_i (and the A0 gradient).
Field3 momenta_from_velocities(const Field3& A_dot, const FieldState& state,
                               const MetricCache& mc, const Units& u);

// The Lagrangian density at one cell, with the electric part of F built from
// the supplied velocities. Cross-check use only.
double em_lagrangian_density(const FieldState& state, const Field3& A_dot,
                             const MetricCache& mc, const CurrentSource& src,
                             const Units& u, int i, int j, int k);

// Total H = sum over cells of (p^i Adot_i - L + lambda p0) * cellvol, with
// Adot reconstructed from the momenta.
double hamiltonian_total(const FieldState& state, const MetricCache& mc,
                         const CurrentSource& src, const Units& u,
                         const Field* lambda = nullptr);

// Right-hand sides of the canonical equations; lambda is the gauge source of
// A0 (null means lambda = 0).
FieldDeriv rhs(const FieldState& state, const MetricCache& mc,
               const CurrentSource& src, const Units& u,
               const Field* lambda = nullptr);

FieldTensor field_tensor(const FieldState& state, const MetricCache& mc,
                         const Units& u);

// D^i = F^{i0}, H_i = -1/2 eps_{ijk} F^{jk}.
void extract_DH(const FieldTensor& F, Field3& D, Field3& H);

// (1/sqrt(3g)) d_i (sqrt(3g) D^i) - 4 pi rho, per cell.
Field gauss_residual(const FieldState& state, const MetricCache& mc,
                     const CurrentSource& src, const Units& u);

// Residual of the recovered curl-H equation,
//   (1/sqrt(-g)) d_j (sqrt(-g) F^{ji}) - (1/c) dD^i/dt - (4 pi / c) j^i,
// which for flat metrics is the cyclic [d_j H_k - d_k H_j] form. Di_dot is
// the measured time derivative of D (centered across integrator steps).
Field3 ampere_residual(const FieldState& state, const MetricCache& mc,
                       const CurrentSource& src, const Units& u,
                       const Field3& Di_dot);

// Discrete continuity residual sqrt(3g) rho_dot + d_i(sqrt(3g) j^i), per cell.
Field continuity_residual(const CurrentSource& src, const MetricCache& mc,
                          double t);

}  // namespace maxham

#endif
