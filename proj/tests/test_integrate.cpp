#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "maxham/initial_conditions.hpp"
#include "maxham/integrate.hpp"
#include "maxham/snapshot.hpp"

using namespace maxham;

namespace {

GridSpec cube(int n) { return GridSpec{{n, n, n}, {1.0 / n, 1.0 / n, 1.0 / n}}; }

double state_sup_diff(const FieldState& a, const FieldState& b) {
  double worst = std::abs(a.time - b.time) * 0.0;
  auto acc = [&](const Field& x, const Field& y) {
    for (std::size_t m = 0; m < x.data().size(); ++m)
      worst = std::max(worst, std::abs(x.data()[m] - y.data()[m]));
  };
  acc(a.A0, b.A0);
  acc(a.p0, b.p0);
  for (int c = 0; c < 3; ++c) {
    acc(a.A[c], b.A[c]);
    acc(a.p[c], b.p[c]);
  }
  return worst;
}

FieldState evolve(FieldState s, const MetricCache& mc, const CurrentSource& src,
                  const Units& u, IntegratorKind kind, double dt, long steps) {
  GaugePolicy gauge;
  StepParams sp;
  sp.dt = dt;
  for (long m = 0; m < steps; ++m) {
    if (kind == IntegratorKind::leapfrog)
      leapfrog_step(s, mc, src, gauge, u, sp);
    else
      rk4_step(s, mc, src, gauge, u, sp);
  }
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("steps preserve the zero state and advance time") {
  GridSpec g = cube(8);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  GaugePolicy gauge;
  StepParams sp;
  sp.dt = 0.01;
  for (auto kind : {IntegratorKind::leapfrog, IntegratorKind::rk4}) {
    FieldState s = FieldState::zero(g);
    if (kind == IntegratorKind::leapfrog)
      leapfrog_step(s, mc, src, gauge, u, sp);
    else
      rk4_step(s, mc, src, gauge, u, sp);
    CHECK(s.time == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(max_abs3(s.p) == 0.0);
    CHECK(max_abs3(s.A) == 0.0);
    CHECK(s.p0.max_abs() == 0.0);
  }
}

TEST_CASE("CFL violations are rejected with both integrators") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  CHECK(max_wave_speed(mc, u) == doctest::Approx(1.0).epsilon(1e-14));
  StepParams sp;
  sp.dt = 0.5 / 16.0 * 1.01;  // just above the limit
  CHECK_THROWS_AS(check_cfl(sp, mc, u), CFLViolation);
  FieldState s = FieldState::zero(g);
  GaugePolicy gauge;
  auto src = CurrentSource::none();
  CHECK_THROWS_AS(leapfrog_step(s, mc, src, gauge, u, sp), CFLViolation);
  CHECK_THROWS_AS(rk4_step(s, mc, src, gauge, u, sp), CFLViolation);
  sp.dt = 0.5 / 16.0;  // exactly at the limit: allowed
  CHECK_NOTHROW(check_cfl(sp, mc, u));

  // a stretched metric tightens the bound through the wave speed
  MetricCache fast(SpacetimeMetric::diagonal({4.0, -1.0, -1.0, -1.0}), g);
  CHECK(max_wave_speed(fast, u) == doctest::Approx(2.0).epsilon(1e-14));
  sp.dt = 0.4 / 16.0;
  CHECK_THROWS_AS(check_cfl(sp, fast, u), CFLViolation);
}

TEST_CASE("non-finite states are reported") {
  GridSpec g = cube(8);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  FieldState s = FieldState::zero(g);
  s.p[0].at(2, 2, 2) = std::numeric_limits<double>::infinity();
  GaugePolicy gauge;
  StepParams sp;
  sp.dt = 0.01;
  CHECK_THROWS_AS(leapfrog_step(s, mc, CurrentSource::none(), gauge, u, sp),
                  NonFiniteState);
}

TEST_CASE("leapfrog is second order in dt against a fine reference") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  const FieldState s0 = init::plane_wave_state(g, pw, u);
  const double T = 0.5;

  const FieldState ref =
      evolve(s0, mc, src, u, IntegratorKind::rk4, T / 512.0, 512);
  const double e1 = state_sup_diff(
      evolve(s0, mc, src, u, IntegratorKind::leapfrog, T / 64.0, 64), ref);
  const double e2 = state_sup_diff(
      evolve(s0, mc, src, u, IntegratorKind::leapfrog, T / 128.0, 128), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("rk4 is fourth order in dt against a fine reference") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  const FieldState s0 = init::plane_wave_state(g, pw, u);
  const double T = 0.5;

  const FieldState ref =
      evolve(s0, mc, src, u, IntegratorKind::rk4, T / 512.0, 512);
  const double e1 = state_sup_diff(
      evolve(s0, mc, src, u, IntegratorKind::rk4, T / 32.0, 32), ref);
  const double e2 = state_sup_diff(
      evolve(s0, mc, src, u, IntegratorKind::rk4, T / 64.0, 64), ref);
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("leapfrog is time reversible to roundoff") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  const FieldState s0 = init::plane_wave_state(g, pw, u);
  GaugePolicy gauge;
  StepParams fwd, bwd;
  fwd.dt = 1.0 / 64.0;
  bwd.dt = -fwd.dt;

  FieldState s = s0;
  const int steps = 128;
  for (int m = 0; m < steps; ++m) leapfrog_step(s, mc, src, gauge, u, fwd);
  for (int m = 0; m < steps; ++m) leapfrog_step(s, mc, src, gauge, u, bwd);
  const double scale = std::max(max_abs3(s0.p), max_abs3(s0.A));
  CHECK(state_sup_diff(s, s0) < 1e-12 * scale);
  CHECK(s.time == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("one discrete period returns a plane wave to near its start") {
  GridSpec g = cube(32);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;  // period 1 in these units
  const FieldState s0 = init::plane_wave_state(g, pw, u);
  const FieldState s =
      evolve(s0, mc, src, u, IntegratorKind::leapfrog, 1.0 / 128.0, 128);
  // deviation is dominated by grid dispersion: the semidiscrete frequency is
  // low by about (k dx)^2/6, a phase slip of ~0.04 rad over one period here
  CHECK(state_sup_diff(s, s0) < 0.06 * max_abs3(s0.A));
  CHECK(state_sup_diff(s, s0) > 0.0);
}

TEST_CASE("lambda_zero keeps A0 bitwise fixed; prescribed lambda drives it") {
  GridSpec g = cube(8);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  StepParams sp;
  sp.dt = 1.0 / 64.0;

  FieldState s = FieldState::zero(g);
  for_cells(g, [&](int i, int j, int k) { s.A0.at(i, j, k) = 0.1 * i + 0.01 * j; });
  const std::vector<double> before = s.A0.data();
  GaugePolicy gauge;  // lambda_zero
  for (int m = 0; m < 5; ++m) leapfrog_step(s, mc, src, gauge, u, sp);
  CHECK(s.A0.data() == before);

  GaugePolicy driven;
  driven.mode = GaugePolicy::Mode::prescribed;
  driven.prescribed_lambda = [](double, int, int, int) { return 2.0; };
  FieldState sd = FieldState::zero(g);
  for (int m = 0; m < 3; ++m) leapfrog_step(sd, mc, src, driven, u, sp);
  // constant lambda integrates exactly: A0 = steps * dt * lambda
  CHECK(sd.A0.at(3, 3, 3) == doctest::Approx(3.0 * sp.dt * 2.0).epsilon(1e-14));

  FieldState sr = FieldState::zero(g);
  for (int m = 0; m < 3; ++m) rk4_step(sr, mc, src, driven, u, sp);
  CHECK(sr.A0.at(3, 3, 3) == doctest::Approx(3.0 * sp.dt * 2.0).epsilon(1e-12));
}

TEST_CASE("run with zero steps records exactly the initial state") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  FieldState s = init::plane_wave_state(g, pw, u);
  GaugePolicy gauge;
  RunSetup setup;
  setup.step.dt = 1.0 / 64.0;
  setup.steps = 0;
  MonitorLog log = run(s, mc, src, gauge, u, setup);
  REQUIRE(log.records.size() == 1);
  CHECK(log.records[0].time == 0.0);
  CHECK(log.records[0].hamiltonian > 0.0);
  CHECK(log.records[0].p0_inf == 0.0);
  CHECK(std::isnan(log.records[0].ampere_inf));
}

TEST_CASE("run honors the monitor cadence and orders times") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  FieldState s = init::plane_wave_state(g, pw, u);
  GaugePolicy gauge;
  RunSetup setup;
  setup.step.dt = 1.0 / 64.0;
  setup.steps = 5;
  setup.monitor_cadence = 2;
  MonitorLog log = run(s, mc, src, gauge, u, setup);
  // records at steps 0, 2, 4
  REQUIRE(log.records.size() == 3);
  for (std::size_t m = 1; m < log.records.size(); ++m)
    CHECK(log.records[m].time > log.records[m - 1].time);
  CHECK(log.records[2].time == doctest::Approx(4.0 / 64.0).epsilon(1e-14));
}

TEST_CASE("the ampere monitor fills interior rows and stays small in vacuum") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  FieldState s = init::plane_wave_state(g, pw, u);
  GaugePolicy gauge;
  RunSetup setup;
  setup.step.dt = 1.0 / 64.0;
  setup.steps = 4;
  MonitorLog log = run(s, mc, src, gauge, u, setup);
  REQUIRE(log.records.size() == 5);
  CHECK(std::isnan(log.records[0].ampere_inf));   // no centered window yet
  CHECK(std::isnan(log.records[4].ampere_inf));   // final row has no successor
  const double scale = pw.amplitude * 2.0 * M_PI;  // ~ |curl H|
  for (int m = 1; m <= 3; ++m) {
    REQUIRE_FALSE(std::isnan(log.records[m].ampere_inf));
    CHECK(log.records[m].ampere_inf < 0.05 * scale);
  }
}

TEST_CASE("long-horizon leapfrog energy deviation stays bounded") {
  GridSpec g = cube(16);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  FieldState s = init::plane_wave_state(g, pw, u);
  GaugePolicy gauge;
  StepParams sp;
  sp.dt = 1.0 / 32.0;
  const double h0 = hamiltonian_total(s, mc, src, u);
  double maxdev = 0.0;
  for (int m = 0; m < 1000; ++m) {
    leapfrog_step(s, mc, src, gauge, u, sp);
    maxdev = std::max(maxdev,
                      std::abs(hamiltonian_total(s, mc, src, u) - h0) / h0);
  }
  CHECK(maxdev < 5e-4);
}

TEST_CASE("monitor CSV output is deterministic across repeated runs") {
  GridSpec g = cube(8);
  MetricCache mc(SpacetimeMetric::minkowski(), g);
  Units u;
  auto src = CurrentSource::none();
  src.is_zero_hint = true;
  init::PlaneWaveParams pw;
  GaugePolicy gauge;
  std::string contents[2];
  for (int trial = 0; trial < 2; ++trial) {
    FieldState s = init::plane_wave_state(g, pw, u);
    RunSetup setup;
    setup.step.dt = 1.0 / 32.0;
    setup.steps = 8;
    MonitorLog log = run(s, mc, src, gauge, u, setup);
    const std::string path =
        "/tmp/maxham_test_monitor_" + std::to_string(trial) + ".csv";
    log.write_csv(path);
    contents[trial] = slurp(path);
    std::remove(path.c_str());
  }
  CHECK(contents[0].size() > 0);
  CHECK(contents[0] == contents[1]);
  // header plus one row per record (steps + 1 with cadence 1)
  CHECK(std::count(contents[0].begin(), contents[0].end(), '\n') == 10);
}

TEST_CASE("snapshot round-trip is bit exact") {
  GridSpec g{{8, 6, 4}, {0.125, 0.25, 0.5}};
  Units u;
  FieldState s = FieldState::zero(g);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto* f : {&s.A0, &s.p0, &s.A[0], &s.A[1], &s.A[2], &s.p[0], &s.p[1],
                  &s.p[2]})
    for (auto& x : f->data()) x = dist(rng);
  s.time = 0.7181;

  const std::string prefix = "/tmp/maxham_test_snapshot";
  write_snapshot(s, prefix);
  FieldState back = read_snapshot(prefix);
  CHECK(back.grid == g);
  CHECK(back.time == s.time);
  CHECK(back.A0.data() == s.A0.data());
  CHECK(back.p0.data() == s.p0.data());
  for (int c = 0; c < 3; ++c) {
    CHECK(back.A[c].data() == s.A[c].data());
    CHECK(back.p[c].data() == s.p[c].data());
  }
  std::remove((prefix + ".bin").c_str());
  std::remove((prefix + ".json").c_str());
}
