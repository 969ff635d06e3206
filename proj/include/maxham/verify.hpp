#ifndef MAXHAM_VERIFY_HPP
#define MAXHAM_VERIFY_HPP

#include <utility>
#include <vector>

#include "maxham/dirac_bergmann.hpp"
#include "maxham/integrate.hpp"
#include "maxham/maxwell_field.hpp"

namespace maxham::verify {

struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// E/B state for the flat-space reference solver.
struct EBState {
  GridSpec grid;
  Field3 E;
  Field3 B;
  double time = 0.0;

  static EBState zero(const GridSpec& g) {
    EBState s;
    s.grid = g;
    for (int a = 0; a < 3; ++a) {
      s.E[a] = Field(g);
      s.B[a] = Field(g);
    }
    return s;
  }
};

// Standard collocated central-difference E/B leapfrog for the Gaussian-units
// vacuum+source Maxwell curl equations on a flat metric:
//   dE/dt = c curl B - 4 pi j,   dB/dt = -c curl E.
// Entirely independent of the canonical evolution path.
class FdtdOracle {
 public:
  FdtdOracle(const EBState& init, CurrentSource src, Units u, double dt,
             double cfl_limit = 0.5);
  void step();
  // E at the integer step; B time-centered from the two adjacent half steps.
  EBState current() const;
  double time() const { return time_; }
  // (1/8pi) integral of (E^2 + B^2) of the centered state.
  double energy() const;

 private:
  CurrentSource src_;
  Units units_;
  double dt_;
  double time_;
  Field3 E_;
  Field3 B_half_;       // at time_ + dt/2
  Field3 B_half_prev_;  // at time_ - dt/2
};

struct CompareReport {
  double max_sup_D = 0.0;  // sup |D - E| over all steps
  double max_sup_H = 0.0;  // sup |H - B|
  double max_l2_D = 0.0;
  double max_l2_H = 0.0;
};

// Evolves the canonical state with leapfrog_step and the oracle side by side
// on the same grid, mapping the canonical state through extract_DH each step.
CompareReport compare_to_oracle(FieldState canonical, const MetricCache& mc,
                                const CurrentSource& src, const GaugePolicy& gauge,
                                const Units& u, const EBState& oracle_init,
                                double dt, long steps);

struct DispersionPoint {
  std::array<int, 3> mode;   // integer wavenumbers per axis
  double k_mag = 0.0;        // |k|
  double cells_per_wavelength = 0.0;
  double omega_measured = 0.0;
  double omega_exact = 0.0;         // c |k|
  double omega_semidiscrete = 0.0;  // c |sin(k dx)/dx|
  double omega_discrete = 0.0;      // full leapfrog prediction
  double rel_error = 0.0;           // |omega_measured / omega_exact - 1|
};

// Vacuum flat-space dispersion measurement: evolve an axis-aligned canonical
// plane wave and fit the probe-point phase over >= `periods` periods.
DispersionPoint dispersion_study(const std::array<int, 3>& mode, int cells,
                                 double cfl, const Units& u, double periods = 10.0);

// Least-squares sinusoid frequency fit; samples must span >= 8 periods of the
// initial guess or FitFailure is thrown.
double fit_frequency(const std::vector<double>& times,
                     const std::vector<double>& samples, double omega_guess);

struct ChainReport {
  int primary = 0;
  int secondary = 0;
  int generations = 0;          // consistency passes that produced constraints
  bool any_lambda_arbitrary = false;
  bool all_lambda_fixed = false;
  std::vector<double> constraint_values;  // at the probe point, generation order
};

// Runs legendre_transform and iterated consistency_resolve at the probe phase
// point until the constraint chain closes.
ChainReport constraint_chain_check(const db::LagrangianSystem& sys, double t,
                                   const db::Vec& q, const db::Vec& qdot_seed,
                                   const db::Vec& p_probe, double tol = 1e-10);

// Single-Fourier-mode reduction of the EM field used by the chain tests:
// q = (A_0-mode, A_longitudinal-mode), L = 1/2 (qdot_1 + k q_0)^2 - q_0 rho.
db::LagrangianSystem em_single_mode_system(double k, double rho);

}  // namespace maxham::verify

#endif
