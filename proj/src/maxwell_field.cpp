#include "maxham/maxwell_field.hpp"

#include <cmath>

namespace maxham {

namespace {

// Spatial part of F_{ab} as a 3x3 antisymmetric matrix, F_{ij} = A_{j,i} - A_{i,j}.
Eigen::Matrix3d magnetic_block(const FieldState& s, int i, int j, int k) {
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const double v = ddx(s.A[b], a, i, j, k) - ddx(s.A[a], b, i, j, k);
      F(a, b) = v;
      F(b, a) = -v;
    }
  return F;
}

Eigen::Matrix3d spatial_upper(const MetricCache& mc, int i, int j, int k) {
  Eigen::Matrix3d g;
  g << mc.gsp_inv[0].at(i, j, k), mc.gsp_inv[1].at(i, j, k), mc.gsp_inv[2].at(i, j, k),
       mc.gsp_inv[1].at(i, j, k), mc.gsp_inv[3].at(i, j, k), mc.gsp_inv[4].at(i, j, k),
       mc.gsp_inv[2].at(i, j, k), mc.gsp_inv[4].at(i, j, k), mc.gsp_inv[5].at(i, j, k);
  return g;
}

// Electric block from the momentum convention: F_{i0} = (4 pi c^2 / sqrt(-g)) p_i with
// p_i = g_{00} g_{ij} p^j.
std::array<double, 3> electric_lower(const FieldState& s, const MetricCache& mc,
                                     const Units& u, int i, int j, int k) {
  const std::array<double, 3> pu = {s.p[0].at(i, j, k), s.p[1].at(i, j, k),
                                    s.p[2].at(i, j, k)};
  const auto pl = mc.lower_momentum(pu, i, j, k);
  const double f = four_pi * u.c * u.c / mc.sqrtg.at(i, j, k);
  return {f * pl[0], f * pl[1], f * pl[2]};
}

}  // namespace

bool FieldState::finite() const {
  auto ok = [](const Field& f) {
    for (double x : f.data())
      if (!std::isfinite(x)) return false;
    return true;
  };
  return ok(A0) && ok(p0) && ok(A[0]) && ok(A[1]) && ok(A[2]) && ok(p[0]) &&
         ok(p[1]) && ok(p[2]);
}

int FieldTensor::comp(int a, int b) {
  static const int map[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5},
                                {2, 4, 5, -1}};
  return map[a][b];
}

Mat4 FieldTensor::lower_at(int i, int j, int k) const {
  Mat4 F = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double v = lower[comp(a, b)].at(i, j, k);
      F(a, b) = v;
      F(b, a) = -v;
    }
  return F;
}

Mat4 FieldTensor::upper_at(int i, int j, int k) const {
  Mat4 F = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double v = upper[comp(a, b)].at(i, j, k);
      F(a, b) = v;
      F(b, a) = -v;
    }
  return F;
}

Field3 velocities_from_momenta(const FieldState& s, const MetricCache& mc,
                               const Units& u) {
  Field3 out{Field(s.grid), Field(s.grid), Field(s.grid)};
  const double c = u.c;
  for_cells(s.grid, [&](int i, int j, int k) {
    const std::array<double, 3> pu = {s.p[0].at(i, j, k), s.p[1].at(i, j, k),
                                      s.p[2].at(i, j, k)};
    const auto pl = mc.lower_momentum(pu, i, j, k);
    const double f = -four_pi * c * c * c / mc.sqrtg.at(i, j, k);
    for (int a = 0; a < 3; ++a)
      out[a].at(i, j, k) = f * pl[a] + c * ddx(s.A0, a, i, j, k);
  });
  return out;
}

Field3 momenta_from_velocities(const Field3& A_dot, const FieldState& s,
                               const MetricCache& mc, const Units& u) {
  Field3 out{Field(s.grid), Field(s.grid), Field(s.grid)};
  const double c = u.c;
  for_cells(s.grid, [&](int i, int j, int k) {
    // p_i = -(sqrt(-g)/4 pi c^2) [A_{i,0} - A_{0,i}], A_{i,0} = Adot_i / c
    std::array<double, 3> pl;
    const double f = -mc.sqrtg.at(i, j, k) / (four_pi * c * c);
    for (int a = 0; a < 3; ++a)
      pl[a] = f * (A_dot[a].at(i, j, k) / c - ddx(s.A0, a, i, j, k));
    // raise: p^i = (1/g_00) g^{ij} p_j
    const Eigen::Matrix3d gi = spatial_upper(mc, i, j, k);
    const Eigen::Vector3d plv(pl[0], pl[1], pl[2]);
    const Eigen::Vector3d pu = gi * plv / mc.g00.at(i, j, k);
    for (int a = 0; a < 3; ++a) out[a].at(i, j, k) = pu(a);
  });
  return out;
}

FieldTensor field_tensor(const FieldState& s, const MetricCache& mc,
                         const Units& u) {
  FieldTensor F;
  F.grid = s.grid;
  for (auto& f : F.lower) f = Field(s.grid);
  for (auto& f : F.upper) f = Field(s.grid);
  for_cells(s.grid, [&](int i, int j, int k) {
    const auto Fi0 = electric_lower(s, mc, u, i, j, k);
    const Eigen::Matrix3d Fsp = magnetic_block(s, i, j, k);
    // lower components: F_{0i} = -F_{i0}
    F.lower[0].at(i, j, k) = -Fi0[0];
    F.lower[1].at(i, j, k) = -Fi0[1];
    F.lower[2].at(i, j, k) = -Fi0[2];
    F.lower[3].at(i, j, k) = Fsp(0, 1);
    F.lower[4].at(i, j, k) = Fsp(0, 2);
    F.lower[5].at(i, j, k) = Fsp(1, 2);
    // raise on the block-diagonal metric: F^{0i} = g^{00} g^{ij} F_{0j},
    // F^{ij} = g^{ik} g^{jl} F_{kl}
    const Eigen::Matrix3d gi = spatial_upper(mc, i, j, k);
    const double ig00 = mc.inv_g00.at(i, j, k);
    const Eigen::Vector3d f0(-Fi0[0], -Fi0[1], -Fi0[2]);  // F_{0j}
    const Eigen::Vector3d f0u = ig00 * (gi * f0);
    const Eigen::Matrix3d fspu = gi * Fsp * gi.transpose();
    F.upper[0].at(i, j, k) = f0u(0);
    F.upper[1].at(i, j, k) = f0u(1);
    F.upper[2].at(i, j, k) = f0u(2);
    F.upper[3].at(i, j, k) = fspu(0, 1);
    F.upper[4].at(i, j, k) = fspu(0, 2);
    F.upper[5].at(i, j, k) = fspu(1, 2);
  });
  return F;
}

void extract_DH(const FieldTensor& F, Field3& D, Field3& H) {
  for (int a = 0; a < 3; ++a) {
    D[a] = Field(F.grid);
    H[a] = Field(F.grid);
  }
  for_cells(F.grid, [&](int i, int j, int k) {
    // D^i = F^{i0} = -F^{0i}
    D[0].at(i, j, k) = -F.upper[0].at(i, j, k);
    D[1].at(i, j, k) = -F.upper[1].at(i, j, k);
    D[2].at(i, j, k) = -F.upper[2].at(i, j, k);
    // H_1 = -F^{23}, H_2 = F^{13}, H_3 = -F^{12}
    H[0].at(i, j, k) = -F.upper[5].at(i, j, k);
    H[1].at(i, j, k) = F.upper[4].at(i, j, k);
    H[2].at(i, j, k) = -F.upper[3].at(i, j, k);
  });
}

double em_lagrangian_density(const FieldState& s, const Field3& A_dot,
                             const MetricCache& mc, const CurrentSource& src,
                             const Units& u, int i, int j, int k) {
  const double c = u.c;
  // F_{i0} = A_{0,i} - A_{i,0}
  Eigen::Vector3d Fi0;
  for (int a = 0; a < 3; ++a)
    Fi0(a) = ddx(s.A0, a, i, j, k) - A_dot[a].at(i, j, k) / c;
  const Eigen::Matrix3d Fsp = magnetic_block(s, i, j, k);
  const Eigen::Matrix3d gi = spatial_upper(mc, i, j, k);
  const double ig00 = mc.inv_g00.at(i, j, k);
  const Eigen::Vector3d Fi0u = ig00 * (gi * Fi0);  // F^{i0} components
  const Eigen::Matrix3d Fspu = gi * Fsp * gi.transpose();
  // F_{ab} F^{ab} = 2 F_{i0} F^{i0} + F_{ij} F^{ij}
  double F2 = 2.0 * Fi0.dot(Fi0u);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) F2 += Fsp(a, b) * Fspu(a, b);
  const double sg = mc.sqrtg.at(i, j, k);
  const double t = s.time;
  const double Aj = s.A0.at(i, j, k) * c * src.rho(t, i, j, k) +
                    s.A[0].at(i, j, k) * src.ji[0](t, i, j, k) +
                    s.A[1].at(i, j, k) * src.ji[1](t, i, j, k) +
                    s.A[2].at(i, j, k) * src.ji[2](t, i, j, k);
  return -F2 * sg / (4.0 * four_pi * c) - Aj * sg / (c * c);
}

double hamiltonian_total(const FieldState& s, const MetricCache& mc,
                         const CurrentSource& src, const Units& u,
                         const Field* lambda) {
  const Field3 A_dot = velocities_from_momenta(s, mc, u);
  double H = 0.0;
  for_cells(s.grid, [&](int i, int j, int k) {
    double h = 0.0;
    for (int a = 0; a < 3; ++a) h += s.p[a].at(i, j, k) * A_dot[a].at(i, j, k);
    h -= em_lagrangian_density(s, A_dot, mc, src, u, i, j, k);
    if (lambda) h += lambda->at(i, j, k) * s.p0.at(i, j, k);
    H += h;
  });
  return H * s.grid.cell_volume();
}

FieldDeriv rhs(const FieldState& s, const MetricCache& mc, const CurrentSource& src,
               const Units& u, const Field* lambda) {
  const double c = u.c;
  const double t = s.time;
  FieldDeriv d;
  d.A0_dot = Field(s.grid);
  d.p0_dot = Field(s.grid);
  if (lambda) d.A0_dot = *lambda;
  d.A_dot = velocities_from_momenta(s, mc, u);

  // G^{ij} = sqrt(-g) F^{ij}, three independent components
  Field g12(s.grid), g13(s.grid), g23(s.grid);
  for_cells(s.grid, [&](int i, int j, int k) {
    const Eigen::Matrix3d Fsp = magnetic_block(s, i, j, k);
    const Eigen::Matrix3d gi = spatial_upper(mc, i, j, k);
    const Eigen::Matrix3d Fspu = gi * Fsp * gi.transpose();
    const double sg = mc.sqrtg.at(i, j, k);
    g12.at(i, j, k) = sg * Fspu(0, 1);
    g13.at(i, j, k) = sg * Fspu(0, 2);
    g23.at(i, j, k) = sg * Fspu(1, 2);
  });

  for (int a = 0; a < 3; ++a) d.p_dot[a] = Field(s.grid);
  const bool zero_src = src.is_zero_hint;
  for_cells(s.grid, [&](int i, int j, int k) {
    const double sg = mc.sqrtg.at(i, j, k);
    // p0_dot = -c p^i_{,i} + (sqrt(-g)/c^2) j^0, j^0 = c rho
    double divp = 0.0;
    for (int a = 0; a < 3; ++a) divp += ddx(s.p[a], a, i, j, k);
    d.p0_dot.at(i, j, k) =
        -c * divp + (zero_src ? 0.0 : sg * src.rho(t, i, j, k) / c);
    // p^i_dot = -(sqrt(-g)/c^2) j^i + (1/4 pi c) d_j (sqrt(-g) F^{ji})
    const double divG1 = -ddx(g12, 1, i, j, k) - ddx(g13, 2, i, j, k);
    const double divG2 = ddx(g12, 0, i, j, k) - ddx(g23, 2, i, j, k);
    const double divG3 = ddx(g13, 0, i, j, k) + ddx(g23, 1, i, j, k);
    const double fc = 1.0 / (four_pi * c);
    d.p_dot[0].at(i, j, k) = fc * divG1;
    d.p_dot[1].at(i, j, k) = fc * divG2;
    d.p_dot[2].at(i, j, k) = fc * divG3;
    if (!zero_src) {
      const double sc = sg / (c * c);
      d.p_dot[0].at(i, j, k) -= sc * src.ji[0](t, i, j, k);
      d.p_dot[1].at(i, j, k) -= sc * src.ji[1](t, i, j, k);
      d.p_dot[2].at(i, j, k) -= sc * src.ji[2](t, i, j, k);
    }
  });
  return d;
}

Field gauss_residual(const FieldState& s, const MetricCache& mc,
                     const CurrentSource& src, const Units& u) {
  // D^i = F^{i0} = (4 pi c^2 / sqrt(-g)) p^i by the momentum definition
  Field3 wD{Field(s.grid), Field(s.grid), Field(s.grid)};  // sqrt(3g) D^i
  for_cells(s.grid, [&](int i, int j, int k) {
    const double f =
        four_pi * u.c * u.c * mc.sqrt3g.at(i, j, k) / mc.sqrtg.at(i, j, k);
    for (int a = 0; a < 3; ++a) wD[a].at(i, j, k) = f * s.p[a].at(i, j, k);
  });
  Field res(s.grid);
  for_cells(s.grid, [&](int i, int j, int k) {
    double div = 0.0;
    for (int a = 0; a < 3; ++a) div += ddx(wD[a], a, i, j, k);
    res.at(i, j, k) =
        div / mc.sqrt3g.at(i, j, k) - four_pi * src.rho(s.time, i, j, k);
  });
  return res;
}

Field3 ampere_residual(const FieldState& s, const MetricCache& mc,
                       const CurrentSource& src, const Units& u,
                       const Field3& Di_dot) {
  const double c = u.c;
  Field g12(s.grid), g13(s.grid), g23(s.grid);
  for_cells(s.grid, [&](int i, int j, int k) {
    const Eigen::Matrix3d Fsp = magnetic_block(s, i, j, k);
    const Eigen::Matrix3d gi = spatial_upper(mc, i, j, k);
    const Eigen::Matrix3d Fspu = gi * Fsp * gi.transpose();
    const double sg = mc.sqrtg.at(i, j, k);
    g12.at(i, j, k) = sg * Fspu(0, 1);
    g13.at(i, j, k) = sg * Fspu(0, 2);
    g23.at(i, j, k) = sg * Fspu(1, 2);
  });
  Field3 res{Field(s.grid), Field(s.grid), Field(s.grid)};
  for_cells(s.grid, [&](int i, int j, int k) {
    const double sg = mc.sqrtg.at(i, j, k);
    const double divG[3] = {-ddx(g12, 1, i, j, k) - ddx(g13, 2, i, j, k),
                            ddx(g12, 0, i, j, k) - ddx(g23, 2, i, j, k),
                            ddx(g13, 0, i, j, k) + ddx(g23, 1, i, j, k)};
    for (int a = 0; a < 3; ++a)
      res[a].at(i, j, k) = divG[a] / sg - Di_dot[a].at(i, j, k) / c -
                           four_pi * src.ji[a](s.time, i, j, k) / c;
  });
  return res;
}

Field continuity_residual(const CurrentSource& src, const MetricCache& mc,
                          double t) {
  const GridSpec& g = mc.grid;
  Field3 wj{Field(g), Field(g), Field(g)};
  for_cells(g, [&](int i, int j, int k) {
    for (int a = 0; a < 3; ++a)
      wj[a].at(i, j, k) = mc.sqrt3g.at(i, j, k) * src.ji[a](t, i, j, k);
  });
  Field res(g);
  for_cells(g, [&](int i, int j, int k) {
    double div = 0.0;
    for (int a = 0; a < 3; ++a) div += ddx(wj[a], a, i, j, k);
    res.at(i, j, k) = mc.sqrt3g.at(i, j, k) * src.rho_dot(t, i, j, k) + div;
  });
  return res;
}

}  // namespace maxham
