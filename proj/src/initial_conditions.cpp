#include "maxham/initial_conditions.hpp"

#include <cmath>
#include <memory>

namespace maxham::init {

namespace {

// nearest-image displacement on the torus
double wrap(double d, double L) {
  d = std::fmod(d, L);
  if (d > 0.5 * L) d -= L;
  if (d < -0.5 * L) d += L;
  return d;
}

std::array<double, 3> displacement(const GridSpec& g, int i, int j, int k,
                                   const std::array<double, 3>& center) {
  return {wrap(g.coord(0, i) - center[0], g.length(0)),
          wrap(g.coord(1, j) - center[1], g.length(1)),
          wrap(g.coord(2, k) - center[2], g.length(2))};
}

}  // namespace

std::array<double, 3> wave_vector(const GridSpec& g, const std::array<int, 3>& mode) {
  return {2.0 * M_PI * mode[0] / g.length(0), 2.0 * M_PI * mode[1] / g.length(1),
          2.0 * M_PI * mode[2] / g.length(2)};
}

double plane_wave_omega(const GridSpec& g, const std::array<int, 3>& mode,
                        const Units& u) {
  const auto k = wave_vector(g, mode);
  return u.c * std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
}

FieldState plane_wave_state(const GridSpec& g, const PlaneWaveParams& p,
                            const Units& u) {
  FieldState s = FieldState::zero(g);
  const auto kv = wave_vector(g, p.mode);
  const double omega = plane_wave_omega(g, p.mode, u);
  const double c = u.c;
  // E = a eps cos(k.x), B = a (khat x eps) cos(k.x);
  // vector potential A^i = (c a / omega) eps_i sin(k.x), covariant A_i = -A^i
  for_cells(g, [&](int i, int j, int k) {
    const double phase = kv[0] * g.coord(0, i) + kv[1] * g.coord(1, j) +
                         kv[2] * g.coord(2, k);
    const double sn = std::sin(phase), cs = std::cos(phase);
    for (int a = 0; a < 3; ++a) {
      s.A[a].at(i, j, k) = -(c * p.amplitude / omega) * p.polarization[a] * sn;
      s.p[a].at(i, j, k) = p.amplitude * p.polarization[a] * cs / (four_pi * c * c);
    }
  });
  return s;
}

verify::EBState plane_wave_eb(const GridSpec& g, const PlaneWaveParams& p,
                              const Units&) {
  verify::EBState s = verify::EBState::zero(g);
  const auto kv = wave_vector(g, p.mode);
  const double kmag = std::sqrt(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
  const std::array<double, 3> khat = {kv[0] / kmag, kv[1] / kmag, kv[2] / kmag};
  const std::array<double, 3> kxe = {
      khat[1] * p.polarization[2] - khat[2] * p.polarization[1],
      khat[2] * p.polarization[0] - khat[0] * p.polarization[2],
      khat[0] * p.polarization[1] - khat[1] * p.polarization[0]};
  for_cells(g, [&](int i, int j, int k) {
    const double phase = kv[0] * g.coord(0, i) + kv[1] * g.coord(1, j) +
                         kv[2] * g.coord(2, k);
    const double cs = std::cos(phase);
    for (int a = 0; a < 3; ++a) {
      s.E[a].at(i, j, k) = p.amplitude * p.polarization[a] * cs;
      s.B[a].at(i, j, k) = p.amplitude * kxe[a] * cs;
    }
  });
  return s;
}

FieldState gaussian_pulse_state(const GridSpec& g, const GaussianPulseParams& p) {
  FieldState s = FieldState::zero(g);
  const double w2 = p.width * p.width;
  for_cells(g, [&](int i, int j, int k) {
    const auto d = displacement(g, i, j, k, p.center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double env = p.amplitude * std::exp(-r2 / w2);
    for (int a = 0; a < 3; ++a) s.A[a].at(i, j, k) = p.polarization[a] * env;
  });
  return s;
}

verify::EBState gaussian_pulse_eb(const GridSpec& g, const GaussianPulseParams& p) {
  verify::EBState s = verify::EBState::zero(g);
  const double w2 = p.width * p.width;
  // covariant A_i = pol_i f(r), so A^i = -pol_i f and B = curl A^vec:
  // B = grad f x (-pol), with grad f = -2 d/w^2 * f
  for_cells(g, [&](int i, int j, int k) {
    const auto d = displacement(g, i, j, k, p.center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double f = p.amplitude * std::exp(-r2 / w2);
    const std::array<double, 3> gradf = {-2.0 * d[0] * f / w2, -2.0 * d[1] * f / w2,
                                         -2.0 * d[2] * f / w2};
    s.B[0].at(i, j, k) =
        -(gradf[1] * p.polarization[2] - gradf[2] * p.polarization[1]);
    s.B[1].at(i, j, k) =
        -(gradf[2] * p.polarization[0] - gradf[0] * p.polarization[2]);
    s.B[2].at(i, j, k) =
        -(gradf[0] * p.polarization[1] - gradf[1] * p.polarization[0]);
  });
  return s;
}

FieldState charge_blob_state(const GridSpec& g, const ChargeBlobParams& p,
                             const MetricCache& mc, const Units& u) {
  FieldState s = FieldState::zero(g);
  const double w2 = p.width * p.width;
  for_cells(g, [&](int i, int j, int k) {
    const auto d = displacement(g, i, j, k, p.center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double psi = p.amplitude * std::exp(-r2 / w2);
    const double f = mc.sqrtg.at(i, j, k) / (four_pi * u.c * u.c);
    for (int a = 0; a < 3; ++a) {
      const double D = -2.0 * d[a] * psi / w2;  // grad psi
      s.p[a].at(i, j, k) = f * D;
    }
  });
  return s;
}

CurrentSource charge_blob_source(const GridSpec& g, const ChargeBlobParams& p) {
  CurrentSource src = CurrentSource::none();
  const double w2 = p.width * p.width;
  const auto grid = g;
  const auto par = p;
  src.rho = [grid, par, w2](double, int i, int j, int k) {
    const auto d = displacement(grid, i, j, k, par.center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double psi = par.amplitude * std::exp(-r2 / w2);
    // lap psi = (4 r^2 / w^4 - 6 / w^2) psi
    return (4.0 * r2 / (w2 * w2) - 6.0 / w2) * psi / four_pi;
  };
  src.continuity_certified = true;  // static rho, j = 0
  return src;
}

FieldState manufactured_state(const GridSpec& g, const ManufacturedParams& p,
                              const MetricCache& mc, const Units& u) {
  FieldState s = FieldState::zero(g);
  for_cells(g, [&](int i, int j, int k) {
    const double f = mc.sqrtg.at(i, j, k) / (four_pi * u.c * u.c);
    const int idx[3] = {i, j, k};
    for (int a = 0; a < 3; ++a) {
      const double x = g.coord(a, idx[a]);
      const double D = p.d_amplitude * std::sin(2.0 * M_PI * x / g.length(a));
      s.p[a].at(i, j, k) = f * D;
    }
  });
  return s;
}

CurrentSource manufactured_source(const GridSpec& g, const ManufacturedParams& p,
                                  const SpacetimeMetric& metric) {
  CurrentSource src = CurrentSource::none();
  const double eps = metric.profile_eps();
  const auto L = metric.profile_length();
  const double amp = p.d_amplitude;
  const auto grid = g;
  src.rho = [grid, eps, L, amp](double, int i, int j, int k) {
    // rho = (1/4pi) sum_a [ h_a' D^a / h_a + dD^a/dx_a ],
    // h_a = 1 + eps sin(2 pi x_a / L_a), D^a = amp sin(2 pi x_a / L_a(grid))
    const int idx[3] = {i, j, k};
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double x = grid.coord(a, idx[a]);
      const double kg = 2.0 * M_PI / grid.length(a);
      const double km = 2.0 * M_PI / L[a];
      const double h = 1.0 + eps * std::sin(km * x);
      const double hp = eps * km * std::cos(km * x);
      const double D = amp * std::sin(kg * x);
      const double Dp = amp * kg * std::cos(kg * x);
      acc += hp * D / h + Dp;
    }
    return acc / four_pi;
  };
  src.continuity_certified = true;  // static
  return src;
}

CurrentSource oscillating_source(const OscillatingSourceParams& p,
                                 const FieldState& initial, const MetricCache& mc,
                                 const Units& u) {
  const GridSpec g = initial.grid;
  const double w2 = p.width * p.width;

  // static current profile J^i(x)
  auto Jfields = std::make_shared<Field3>(Field3{Field(g), Field(g), Field(g)});
  for_cells(g, [&](int i, int j, int k) {
    const auto d = displacement(g, i, j, k, p.center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double env = p.j_amplitude * std::exp(-r2 / w2);
    for (int a = 0; a < 3; ++a) (*Jfields)[a].at(i, j, k) = p.direction[a] * env;
  });

  // rho0 = (c^2 / sqrt(-g)) div_disc p(0): discrete Gauss consistency at t = 0
  auto rho0 = std::make_shared<Field>(g);
  for_cells(g, [&](int i, int j, int k) {
    double divp = 0.0;
    for (int a = 0; a < 3; ++a) divp += ddx(initial.p[a], a, i, j, k);
    rho0->at(i, j, k) = u.c * u.c * divp / mc.sqrtg.at(i, j, k);
  });

  // divw = (1/sqrt(-g)) div_disc(sqrt(-g) J): drives the exact discrete
  // continuity companion of j = J sin(w t)
  auto divw = std::make_shared<Field>(g);
  {
    Field3 wJ{Field(g), Field(g), Field(g)};
    for_cells(g, [&](int i, int j, int k) {
      for (int a = 0; a < 3; ++a)
        wJ[a].at(i, j, k) = mc.sqrtg.at(i, j, k) * (*Jfields)[a].at(i, j, k);
    });
    for_cells(g, [&](int i, int j, int k) {
      double div = 0.0;
      for (int a = 0; a < 3; ++a) div += ddx(wJ[a], a, i, j, k);
      divw->at(i, j, k) = div / mc.sqrtg.at(i, j, k);
    });
  }

  const double w = p.omega;
  CurrentSource src;
  src.continuity_certified = true;
  for (int a = 0; a < 3; ++a)
    src.ji[a] = [Jfields, a, w](double t, int i, int j, int k) {
      return (*Jfields)[a].at(i, j, k) * std::sin(w * t);
    };
  src.rho = [rho0, divw, w](double t, int i, int j, int k) {
    return rho0->at(i, j, k) + divw->at(i, j, k) * (std::cos(w * t) - 1.0) / w;
  };
  src.rho_dot = [divw, w](double t, int i, int j, int k) {
    return -divw->at(i, j, k) * std::sin(w * t);
  };
  return src;
}

}  // namespace maxham::init
