#ifndef MAXHAM_INTEGRATE_HPP
#define MAXHAM_INTEGRATE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maxham/maxwell_field.hpp"

namespace maxham {

struct CFLViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GaugePolicy {
  enum class Mode { lambda_zero, prescribed };
  Mode mode = Mode::lambda_zero;
  // lambda(t, i, j, k); only consulted in prescribed mode
  std::function<double(double, int, int, int)> prescribed_lambda;
};

struct MonitorRecord {
  double time = 0.0;
  double hamiltonian = 0.0;
  double p0_inf = 0.0;
  double gauss_inf = 0.0;
  double ampere_inf = std::numeric_limits<double>::quiet_NaN();  // NaN = not computed
};

struct MonitorLog {
  std::vector<MonitorRecord> records;
  void write_csv(const std::string& path) const;
};

struct StepParams {
  double dt = 0.0;
  double cfl_limit = 0.5;
};

// Coordinate wave-speed bound c * max sqrt(g_00 gamma^{ii}) used by the CFL check.
double max_wave_speed(const MetricCache& mc, const Units& u);

void check_cfl(const StepParams& sp, const MetricCache& mc, const Units& u);

// Kick-drift-kick update of (A_i, p^i); p0 integrated by its canonical
// equation of motion at the half
// step, A_0 advanced by the gauge policy. Second order, time reversible.
void leapfrog_step(FieldState& state, const MetricCache& mc,
                   const CurrentSource& src, const GaugePolicy& gauge,
                   const Units& u, const StepParams& sp);

// Classical RK4 over the full canonical right-hand side (non-symplectic
// reference integrator).
void rk4_step(FieldState& state, const MetricCache& mc, const CurrentSource& src,
              const GaugePolicy& gauge, const Units& u, const StepParams& sp);

enum class IntegratorKind { leapfrog, rk4 };

struct RunSetup {
  IntegratorKind integrator = IntegratorKind::leapfrog;
  StepParams step;
  long steps = 0;
  long monitor_cadence = 1;
  bool monitor_ampere = true;
  long snapshot_cadence = 0;  // 0 = only final snapshot skipped
  std::function<void(const FieldState&, long step)> snapshot_sink;
  std::function<void(const FieldState&, long step)> observer;  // every step, post-update
};

// Executes the scenario steps, recording monitors at the configured cadence.
// Deterministic in serial mode. The ampere monitor for step n uses D differenced
// across steps n-1 and n+1, so it appears one cadence tick delayed.
MonitorLog run(FieldState& state, const MetricCache& mc, const CurrentSource& src,
               const GaugePolicy& gauge, const Units& u, const RunSetup& setup);

}  // namespace maxham

#endif
