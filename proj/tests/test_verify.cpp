#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "maxham/initial_conditions.hpp"
#include "maxham/verify.hpp"

using namespace maxham;

namespace {

GridSpec cube(int n) { return GridSpec{{n, n, n}, {1.0 / n, 1.0 / n, 1.0 / n}}; }

double eb_sup_diff(const verify::EBState& a, const verify::EBState& b) {
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t m = 0; m < a.E[c].data().size(); ++m)
      worst = std::max(worst, std::abs(a.E[c].data()[m] - b.E[c].data()[m]));
    for (std::size_t m = 0; m < a.B[c].data().size(); ++m)
      worst = std::max(worst, std::abs(a.B[c].data()[m] - b.B[c].data()[m]));
  }
  return worst;
}

double oracle_ladder_error(int n, double dt_over, long steps_scale,
                           bool pulse, double pulse_width) {
  GridSpec g = cube(n);
  Units u;
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  GaugePolicy gauge;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  verify::CompareReport rep;
  if (pulse) {
    init::GaussianPulseParams p;
    p.width = pulse_width;
    rep = verify::compare_to_oracle(init::gaussian_pulse_state(g, p), mc, src,
                                    gauge, u, init::gaussian_pulse_eb(g, p),
                                    dt_over / n, steps_scale * n);
  } else {
    init::PlaneWaveParams p;
    rep = verify::compare_to_oracle(init::plane_wave_state(g, p, u), mc, src,
                                    gauge, u, init::plane_wave_eb(g, p, u),
                                    dt_over / n, steps_scale * n);
  }
  return std::max(rep.max_sup_D, rep.max_sup_H);
}

}  // namespace

TEST_CASE("the reference solver keeps the zero state at zero") {
  GridSpec g = cube(8);
  Units u;
  verify::FdtdOracle oracle(verify::EBState::zero(g), CurrentSource::none(), u,
                            0.01);
  for (int m = 0; m < 10; ++m) oracle.step();
  CHECK(oracle.time() == doctest::Approx(0.1).epsilon(1e-12));
  const verify::EBState s = oracle.current();
  CHECK(max_abs3(s.E) == 0.0);
  CHECK(max_abs3(s.B) == 0.0);
  CHECK(oracle.energy() == 0.0);
}

TEST_CASE("the reference solver holds energy and returns after one period") {
  const int n = 16;
  GridSpec g = cube(n);
  Units u;
  init::PlaneWaveParams pw;
  const verify::EBState init = init::plane_wave_eb(g, pw, u);
  const double dt = 1.0 / 64.0;
  verify::FdtdOracle oracle(init, CurrentSource::none(), u, dt);
  const double e0 = oracle.energy();
  CHECK(e0 > 0.0);
  double maxdev = 0.0;
  for (int m = 0; m < 64; ++m) {  // exactly one period of the continuum wave
    oracle.step();
    maxdev = std::max(maxdev, std::abs(oracle.energy() - e0) / e0);
  }
  CHECK(maxdev < 5e-3);
  // one-period return up to the grid-dispersion phase slip, ~(k dx)^2/6 * 2 pi
  CHECK(eb_sup_diff(oracle.current(), init) < 0.25 * pw.amplitude);
}

TEST_CASE("compare_to_oracle reports zero for matching zero data") {
  GridSpec g = cube(8);
  Units u;
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  GaugePolicy gauge;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  verify::CompareReport rep = verify::compare_to_oracle(
      FieldState::zero(g), mc, src, gauge, u, verify::EBState::zero(g),
      0.01, 8);
  CHECK(rep.max_sup_D == 0.0);
  CHECK(rep.max_sup_H == 0.0);
  CHECK(rep.max_l2_D == 0.0);
  CHECK(rep.max_l2_H == 0.0);
}

TEST_CASE("canonical vs reference gap shrinks at second order: plane wave") {
  const double e16 = oracle_ladder_error(16, 0.5, 1, false, 0.0);
  const double e32 = oracle_ladder_error(32, 0.5, 1, false, 0.0);
  CHECK(e16 > 0.0);
  const double ratio = e16 / e32;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.6);
}

TEST_CASE("canonical vs reference gap shrinks at second order: pulse") {
  const double e16 = oracle_ladder_error(16, 0.5, 1, true, 0.2);
  const double e32 = oracle_ladder_error(32, 0.5, 1, true, 0.2);
  CHECK(e16 > 0.0);
  const double ratio = e16 / e32;
  CHECK(ratio > 3.1);
  CHECK(ratio < 4.6);
}

TEST_CASE("fit_frequency recovers a clean sinusoid") {
  const double omega = 7.3, phase = 0.4;
  std::vector<double> times, samples;
  const double T = 2.0 * M_PI / omega;
  const double dt = T / 40.0;
  for (int m = 0; m <= 400; ++m) {  // 10 periods
    times.push_back(m * dt);
    samples.push_back(1.7 * std::cos(omega * m * dt + phase));
  }
  const double fitted = verify::fit_frequency(times, samples, omega * 1.03);
  CHECK(std::abs(fitted / omega - 1.0) < 1e-7);
}

TEST_CASE("fit_frequency rejects windows that are too short") {
  const double omega = 5.0;
  std::vector<double> times, samples;
  const double T = 2.0 * M_PI / omega;
  for (int m = 0; m <= 50; ++m) {  // only ~2 periods
    const double t = m * (2.0 * T / 50.0);
    times.push_back(t);
    samples.push_back(std::cos(omega * t));
  }
  CHECK_THROWS_AS(verify::fit_frequency(times, samples, omega),
                  verify::FitFailure);
}

TEST_CASE("dispersion at marginal step size meets the accuracy targets") {
  Units u;
  const auto p16 = verify::dispersion_study({1, 0, 0}, 16, 1.0, u);
  CHECK(p16.cells_per_wavelength == doctest::Approx(16.0));
  CHECK(p16.rel_error <= 2e-2);
  // measured frequency matches the closed-form fully discrete prediction
  CHECK(std::abs(p16.omega_measured / p16.omega_discrete - 1.0) < 1e-3);

  const auto p32 = verify::dispersion_study({1, 0, 0}, 32, 1.0, u);
  const double ratio = p16.rel_error / p32.rel_error;
  CHECK(ratio > 3.3);
  CHECK(ratio < 4.7);
}

TEST_CASE("small steps reproduce the semidiscrete dispersion branch") {
  Units u;
  const auto pt = verify::dispersion_study({1, 0, 0}, 16, 0.05, u);
  CHECK(std::abs(pt.omega_measured / pt.omega_semidiscrete - 1.0) < 1e-3);
  // and the continuum gap is the familiar quadratic one, ~ (k dx)^2 / 6
  const double kdx = pt.k_mag * (1.0 / 16.0);
  CHECK(pt.rel_error ==
        doctest::Approx(kdx * kdx / 6.0).epsilon(0.05));
}

TEST_CASE("constraint chain of the single-mode field system") {
  const double k = 2.0, rho = 0.7;
  db::LagrangianSystem sys = verify::em_single_mode_system(k, rho);
  db::Vec q(2), qd(2), p(2);
  q << 0.3, -0.2;
  qd << 0.1, 0.5;
  p << 0.0, 0.9;
  verify::ChainReport rep = verify::constraint_chain_check(sys, 0.0, q, qd, p);
  CHECK(rep.primary == 1);
  CHECK(rep.secondary == 1);
  CHECK(rep.generations == 1);
  CHECK(rep.any_lambda_arbitrary);
  CHECK_FALSE(rep.all_lambda_fixed);
  REQUIRE(rep.constraint_values.size() == 2);
  for (double v : rep.constraint_values) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("constraint chain of a second-class cross-coupled system") {
  db::LagrangianSystem sys;
  sys.dim = 2;
  sys.lagrangian = [](double, const db::Vec& q, const db::Vec& qdot) {
    return qdot[0] * q[1] - 0.5 * (q[0] * q[0] + q[1] * q[1]);
  };
  db::Vec q(2), qd(2), p(2);
  q << 1.0, 0.5;
  qd << 0.0, 0.0;
  p << 0.4, 0.1;
  verify::ChainReport rep = verify::constraint_chain_check(sys, 0.0, q, qd, p);
  CHECK(rep.primary == 2);
  CHECK(rep.secondary == 0);
  CHECK(rep.generations == 0);
  CHECK(rep.all_lambda_fixed);
  CHECK_FALSE(rep.any_lambda_arbitrary);
}

TEST_CASE("a regular system produces an empty chain") {
  db::LagrangianSystem sys;
  sys.dim = 1;
  sys.lagrangian = [](double, const db::Vec& q, const db::Vec& qdot) {
    return 0.5 * qdot[0] * qdot[0] - 0.5 * q[0] * q[0];
  };
  db::Vec q(1), qd(1), p(1);
  q << 0.7;
  qd << -0.3;
  p << -0.3;
  verify::ChainReport rep = verify::constraint_chain_check(sys, 0.0, q, qd, p);
  CHECK(rep.primary == 0);
  CHECK(rep.secondary == 0);
  CHECK(rep.generations == 0);
  CHECK_FALSE(rep.any_lambda_arbitrary);
  CHECK_FALSE(rep.all_lambda_fixed);
  CHECK(rep.constraint_values.empty());
}

TEST_CASE("the reference solver shares no code with the canonical path") {
  std::ifstream in(std::string(MAXHAM_SOURCE_DIR) + "/src/verify_fdtd.cpp");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  CHECK(text.find("FdtdOracle") != std::string::npos);
  for (const char* token :
       {"leapfrog_step", "rk4_step", "field_tensor", "velocities_from_momenta",
        "momenta_from_velocities", "gauss_residual", "hamiltonian_total",
        "integrate.hpp"}) {
    CAPTURE(token);
    CHECK(text.find(token) == std::string::npos);
  }
}
