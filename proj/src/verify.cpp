#include "maxham/verify.hpp"

#include <cmath>

#include "maxham/initial_conditions.hpp"

namespace maxham::verify {

namespace {

void accum_diff(const Field3& a, const Field3& b, double vol, double& sup,
                double& l2) {
  double s = 0.0, q = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& ad = a[c].data();
    const auto& bd = b[c].data();
    for (std::size_t m = 0; m < ad.size(); ++m) {
      const double d = std::abs(ad[m] - bd[m]);
      s = std::max(s, d);
      q += d * d;
    }
  }
  sup = std::max(sup, s);
  l2 = std::max(l2, std::sqrt(q * vol));
}

// sum-of-squares residual of the best a cos(wt) + b sin(wt) fit
double sinusoid_ssr(const std::vector<double>& t, const std::vector<double>& y,
                    double omega) {
  double cc = 0, cs = 0, ss = 0, cy = 0, sy = 0, yy = 0;
  for (std::size_t m = 0; m < t.size(); ++m) {
    const double c = std::cos(omega * t[m]);
    const double s = std::sin(omega * t[m]);
    cc += c * c;
    cs += c * s;
    ss += s * s;
    cy += c * y[m];
    sy += s * y[m];
    yy += y[m] * y[m];
  }
  const double det = cc * ss - cs * cs;
  if (std::abs(det) < 1e-300) return yy;
  const double a = (ss * cy - cs * sy) / det;
  const double b = (cc * sy - cs * cy) / det;
  // at the normal-equation optimum, SSR = yy - (a*cy + b*sy)
  return yy - (a * cy + b * sy);
}

}  // namespace

CompareReport compare_to_oracle(FieldState canonical, const MetricCache& mc,
                                const CurrentSource& src, const GaugePolicy& gauge,
                                const Units& u, const EBState& oracle_init,
                                double dt, long steps) {
  if (canonical.grid != oracle_init.grid)
    throw GridMismatch("canonical and oracle grids differ");
  FdtdOracle oracle(oracle_init, src, u, dt);
  StepParams sp;
  sp.dt = dt;
  CompareReport rep;
  const double vol = canonical.grid.cell_volume();

  auto compare_now = [&]() {
    const FieldTensor F = field_tensor(canonical, mc, u);
    Field3 D, H;
    extract_DH(F, D, H);
    const EBState eb = oracle.current();
    accum_diff(D, eb.E, vol, rep.max_sup_D, rep.max_l2_D);
    accum_diff(H, eb.B, vol, rep.max_sup_H, rep.max_l2_H);
  };

  compare_now();
  for (long n = 0; n < steps; ++n) {
    leapfrog_step(canonical, mc, src, gauge, u, sp);
    oracle.step();
    compare_now();
  }
  return rep;
}

double fit_frequency(const std::vector<double>& times,
                     const std::vector<double>& samples, double omega_guess) {
  if (times.size() != samples.size() || times.size() < 16)
    throw FitFailure("too few samples for a frequency fit");
  const double span = times.back() - times.front();
  if (span * omega_guess < 8.0 * 2.0 * M_PI)
    throw FitFailure("signal shorter than 8 periods of the guess frequency");
  double lo = 0.8 * omega_guess, hi = 1.2 * omega_guess;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sinusoid_ssr(times, samples, x1);
  double f2 = sinusoid_ssr(times, samples, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = sinusoid_ssr(times, samples, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = sinusoid_ssr(times, samples, x2);
    }
  }
  return 0.5 * (lo + hi);
}

DispersionPoint dispersion_study(const std::array<int, 3>& mode, int cells,
                                 double cfl, const Units& u, double periods) {
  // axis-aligned modes only need resolution along their own axis
  GridSpec g;
  for (int a = 0; a < 3; ++a) {
    g.n[a] = mode[a] != 0 ? cells : 4;
    g.dx[a] = 1.0 / g.n[a];
  }
  g.validate();

  init::PlaneWaveParams pw;
  pw.mode = mode;
  pw.amplitude = 1e-3;
  // any unit vector orthogonal to k
  const auto kv = init::wave_vector(g, mode);
  Eigen::Vector3d k(kv[0], kv[1], kv[2]);
  Eigen::Vector3d trial = std::abs(k.normalized().dot(Eigen::Vector3d::UnitY())) < 0.9
                              ? Eigen::Vector3d::UnitY()
                              : Eigen::Vector3d::UnitZ();
  Eigen::Vector3d pol = (trial - trial.dot(k.normalized()) * k.normalized()).normalized();
  pw.polarization = {pol(0), pol(1), pol(2)};

  FieldState state = init::plane_wave_state(g, pw, u);
  const SpacetimeMetric metric = SpacetimeMetric::minkowski();
  const MetricCache mc(metric, g);
  const CurrentSource src = CurrentSource::none();
  GaugePolicy gauge;  // lambda_zero

  DispersionPoint pt;
  pt.mode = mode;
  pt.k_mag = k.norm();
  pt.omega_exact = u.c * pt.k_mag;
  int waves_axis = 0;
  for (int a = 0; a < 3; ++a)
    if (mode[a] != 0) waves_axis = a;
  pt.cells_per_wavelength =
      g.n[waves_axis] / static_cast<double>(std::abs(mode[waves_axis]));
  double keff2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double s = std::sin(kv[a] * g.dx[a]) / g.dx[a];
    keff2 += s * s;
  }
  pt.omega_semidiscrete = u.c * std::sqrt(keff2);

  StepParams sp;
  sp.dt = cfl * g.min_dx() / u.c;
  sp.cfl_limit = cfl;
  pt.omega_discrete =
      (2.0 / sp.dt) * std::asin(0.5 * sp.dt * pt.omega_semidiscrete);

  const double T = 2.0 * M_PI / pt.omega_exact;
  const long steps = static_cast<long>(std::ceil(periods * T / sp.dt)) + 1;
  std::vector<double> times, samples;
  times.reserve(steps + 1);
  samples.reserve(steps + 1);
  int probe_axis = 0;
  double best = 0.0;
  for (int a = 0; a < 3; ++a)
    if (std::abs(pw.polarization[a]) > best) {
      best = std::abs(pw.polarization[a]);
      probe_axis = a;
    }
  times.push_back(state.time);
  samples.push_back(state.p[probe_axis].at(1, 1, 1));
  for (long n = 0; n < steps; ++n) {
    leapfrog_step(state, mc, src, gauge, u, sp);
    times.push_back(state.time);
    samples.push_back(state.p[probe_axis].at(1, 1, 1));
  }
  pt.omega_measured = fit_frequency(times, samples, pt.omega_exact);
  pt.rel_error = std::abs(pt.omega_measured / pt.omega_exact - 1.0);
  return pt;
}

ChainReport constraint_chain_check(const db::LagrangianSystem& sys, double t,
                                   const db::Vec& q, const db::Vec& qdot_seed,
                                   const db::Vec& p_probe, double tol) {
  db::ConstrainedHamiltonian ch = db::legendre_transform(sys, t, q, qdot_seed);
  ChainReport rep;
  rep.primary = static_cast<int>(ch.constraints.items.size());

  db::Vec qq = q, pp = p_probe;
  // Gauss-Newton projection of (q,p) onto the current constraint surface
  auto project = [&]() {
    const int m = static_cast<int>(ch.constraints.items.size());
    if (m == 0) return;
    const int n = ch.dim;
    for (int iter = 0; iter < 50; ++iter) {
      db::Vec phi(m);
      db::Mat J(m, 2 * n);
      for (int a = 0; a < m; ++a) {
        phi(a) = ch.constraints.items[a].fn(t, qq, pp);
        for (int i = 0; i < n; ++i) {
          const double hq = db::fd_step(qq[i]);
          db::Vec qp = qq, qm = qq;
          qp[i] += hq;
          qm[i] -= hq;
          J(a, i) = (ch.constraints.items[a].fn(t, qp, pp) -
                     ch.constraints.items[a].fn(t, qm, pp)) /
                    (2.0 * hq);
          const double hp = db::fd_step(pp[i]);
          db::Vec ppp = pp, ppm = pp;
          ppp[i] += hp;
          ppm[i] -= hp;
          J(a, n + i) = (ch.constraints.items[a].fn(t, qq, ppp) -
                         ch.constraints.items[a].fn(t, qq, ppm)) /
                        (2.0 * hp);
        }
      }
      if (phi.cwiseAbs().maxCoeff() < 1e-9) return;
      const db::Vec dx =
          J.transpose() * (J * J.transpose())
                              .ldlt()
                              .solve(phi);
      for (int i = 0; i < n; ++i) {
        qq[i] -= dx[i];
        pp[i] -= dx[n + i];
      }
    }
  };

  for (int gen = 0; gen < 8; ++gen) {
    project();
    db::ConsistencyResult res = db::consistency_resolve(ch, t, qq, pp, tol);
    for (bool arb : res.lambda_arbitrary)
      if (arb) rep.any_lambda_arbitrary = true;
    if (res.new_constraints.empty()) {
      rep.all_lambda_fixed =
          !rep.any_lambda_arbitrary && !ch.constraints.items.empty();
      break;
    }
    ++rep.generations;
    rep.secondary += static_cast<int>(res.new_constraints.size());
    for (auto& c : res.new_constraints) ch.constraints.items.push_back(std::move(c));
  }
  for (const auto& c : ch.constraints.items)
    rep.constraint_values.push_back(c.fn(t, qq, pp));
  return rep;
}

db::LagrangianSystem em_single_mode_system(double k, double rho) {
  db::LagrangianSystem sys;
  sys.dim = 2;
  sys.lagrangian = [k, rho](double, const db::Vec& q, const db::Vec& qdot) {
    const double e = qdot[1] + k * q[0];
    return 0.5 * e * e - q[0] * rho;
  };
  return sys;
}

}  // namespace maxham::verify
