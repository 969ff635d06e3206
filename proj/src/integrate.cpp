#include "maxham/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace maxham {

namespace {

void axpy(Field& y, double a, const Field& x) {
  auto& yd = y.data();
  const auto& xd = x.data();
  for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

void state_axpy(FieldState& s, double a, const FieldDeriv& d) {
  axpy(s.A0, a, d.A0_dot);
  axpy(s.p0, a, d.p0_dot);
  for (int i = 0; i < 3; ++i) {
    axpy(s.A[i], a, d.A_dot[i]);
    axpy(s.p[i], a, d.p_dot[i]);
  }
}

void require_finite(const FieldState& s) {
  if (!s.finite()) throw NonFiniteState("field state contains non-finite values");
}

Field make_lambda(const GaugePolicy& gauge, const GridSpec& g, double t) {
  Field l(g);
  if (gauge.mode == GaugePolicy::Mode::prescribed && gauge.prescribed_lambda)
    for_cells(g, [&](int i, int j, int k) {
      l.at(i, j, k) = gauge.prescribed_lambda(t, i, j, k);
    });
  return l;
}

}  // namespace

double max_wave_speed(const MetricCache& mc, const Units& u) {
  double f = 0.0;
  for_cells(mc.grid, [&](int i, int j, int k) {
    const double g00 = mc.g00.at(i, j, k);
    // gamma^{aa} = -g^{aa} on the diagonal of the inverse spatial block
    const double gxx = -mc.gsp_inv[0].at(i, j, k);
    const double gyy = -mc.gsp_inv[3].at(i, j, k);
    const double gzz = -mc.gsp_inv[5].at(i, j, k);
    f = std::max(f, g00 * std::max(gxx, std::max(gyy, gzz)));
  });
  return u.c * std::sqrt(f);
}

void check_cfl(const StepParams& sp, const MetricCache& mc, const Units& u) {
  const double vmax = max_wave_speed(mc, u);
  const double limit = sp.cfl_limit * mc.grid.min_dx() / vmax;
  if (sp.dt > limit * (1.0 + 1e-12))
    throw CFLViolation("dt = " + std::to_string(sp.dt) + " exceeds CFL bound " +
                       std::to_string(limit));
}

void leapfrog_step(FieldState& state, const MetricCache& mc,
                   const CurrentSource& src, const GaugePolicy& gauge,
                   const Units& u, const StepParams& sp) {
  check_cfl(sp, mc, u);
  const double dt = sp.dt;
  const double c = u.c;
  const double t0 = state.time;

  // half kick of p^i
  {
    const FieldDeriv d = rhs(state, mc, src, u);
    for (int a = 0; a < 3; ++a) axpy(state.p[a], 0.5 * dt, d.p_dot[a]);
  }
  // p0 by its canonical equation of motion evaluated at the half step
  {
    const double tm = t0 + 0.5 * dt;
    for_cells(state.grid, [&](int i, int j, int k) {
      double divp = 0.0;
      for (int a = 0; a < 3; ++a) divp += ddx(state.p[a], a, i, j, k);
      state.p0.at(i, j, k) +=
          dt * (-c * divp + mc.sqrtg.at(i, j, k) * src.rho(tm, i, j, k) / c);
    });
  }
  // gauge update of A_0 (lambda_zero leaves A_0 bitwise untouched)
  if (gauge.mode == GaugePolicy::Mode::prescribed && gauge.prescribed_lambda) {
    const double tm = t0 + 0.5 * dt;
    for_cells(state.grid, [&](int i, int j, int k) {
      state.A0.at(i, j, k) += dt * gauge.prescribed_lambda(tm, i, j, k);
    });
  }
  // drift of A_i
  {
    const Field3 A_dot = velocities_from_momenta(state, mc, u);
    for (int a = 0; a < 3; ++a) axpy(state.A[a], dt, A_dot[a]);
  }
  // second half kick at t0 + dt
  {
    state.time = t0 + dt;
    const FieldDeriv d = rhs(state, mc, src, u);
    for (int a = 0; a < 3; ++a) axpy(state.p[a], 0.5 * dt, d.p_dot[a]);
  }
  require_finite(state);
}

void rk4_step(FieldState& state, const MetricCache& mc, const CurrentSource& src,
              const GaugePolicy& gauge, const Units& u, const StepParams& sp) {
  check_cfl(sp, mc, u);
  const double dt = sp.dt;
  const double t0 = state.time;
  const bool prescribed = gauge.mode == GaugePolicy::Mode::prescribed;

  auto eval = [&](const FieldState& s) {
    if (prescribed) {
      const Field l = make_lambda(gauge, s.grid, s.time);
      return rhs(s, mc, src, u, &l);
    }
    return rhs(s, mc, src, u);
  };

  const FieldDeriv k1 = eval(state);
  FieldState s2 = state;
  state_axpy(s2, 0.5 * dt, k1);
  s2.time = t0 + 0.5 * dt;
  const FieldDeriv k2 = eval(s2);
  FieldState s3 = state;
  state_axpy(s3, 0.5 * dt, k2);
  s3.time = t0 + 0.5 * dt;
  const FieldDeriv k3 = eval(s3);
  FieldState s4 = state;
  state_axpy(s4, dt, k3);
  s4.time = t0 + dt;
  const FieldDeriv k4 = eval(s4);

  state_axpy(state, dt / 6.0, k1);
  state_axpy(state, dt / 3.0, k2);
  state_axpy(state, dt / 3.0, k3);
  state_axpy(state, dt / 6.0, k4);
  state.time = t0 + dt;
  require_finite(state);
}

void MonitorLog::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open monitor csv for writing: " + path);
  out << "time,hamiltonian,p0_inf,gauss_inf,ampere_inf\n";
  char buf[512];
  for (const auto& r : records) {
    if (std::isnan(r.ampere_inf))
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,\n", r.time,
                    r.hamiltonian, r.p0_inf, r.gauss_inf);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.time,
                    r.hamiltonian, r.p0_inf, r.gauss_inf, r.ampere_inf);
    out << buf;
  }
}

MonitorLog run(FieldState& state, const MetricCache& mc, const CurrentSource& src,
               const GaugePolicy& gauge, const Units& u, const RunSetup& setup) {
  MonitorLog log;
  const long cadence = std::max<long>(1, setup.monitor_cadence);

  auto record = [&](const FieldState& s) {
    MonitorRecord r;
    r.time = s.time;
    r.hamiltonian = hamiltonian_total(s, mc, src, u);
    r.p0_inf = s.p0.max_abs();
    r.gauss_inf = gauss_residual(s, mc, src, u).max_abs();
    log.records.push_back(r);
    return log.records.size() - 1;
  };

  // rolling states for the centered D time derivative of the ampere monitor
  FieldState prev2 = state, prev1 = state;
  long pending_row = -1;  // log row awaiting its ampere entry
  long pending_step = -1;

  record(state);
  if (setup.snapshot_sink && setup.snapshot_cadence > 0) setup.snapshot_sink(state, 0);

  for (long n = 1; n <= setup.steps; ++n) {
    prev2 = prev1;
    prev1 = state;
    if (setup.integrator == IntegratorKind::leapfrog)
      leapfrog_step(state, mc, src, gauge, u, setup.step);
    else
      rk4_step(state, mc, src, gauge, u, setup.step);
    if (setup.observer) setup.observer(state, n);

    if (setup.monitor_ampere && pending_row >= 0 && pending_step == n - 1) {
      // D^i = (4 pi c^2 / sqrt(-g)) p^i; metric static, so Ddot from p
      Field3 Ddot{Field(state.grid), Field(state.grid), Field(state.grid)};
      const double inv2dt = 1.0 / (2.0 * setup.step.dt);
      for_cells(state.grid, [&](int i, int j, int k) {
        const double f = four_pi * u.c * u.c / mc.sqrtg.at(i, j, k);
        for (int a = 0; a < 3; ++a)
          Ddot[a].at(i, j, k) =
              f * (state.p[a].at(i, j, k) - prev2.p[a].at(i, j, k)) * inv2dt;
      });
      const Field3 res = ampere_residual(prev1, mc, src, u, Ddot);
      log.records[pending_row].ampere_inf = max_abs3(res);
      pending_row = -1;
    }

    if (n % cadence == 0) {
      const long row = static_cast<long>(record(state));
      if (setup.monitor_ampere && n < setup.steps) {
        pending_row = row;
        pending_step = n;
      }
    }
    if (setup.snapshot_sink && setup.snapshot_cadence > 0 &&
        n % setup.snapshot_cadence == 0)
      setup.snapshot_sink(state, n);
  }
  return log;
}

}  // namespace maxham
