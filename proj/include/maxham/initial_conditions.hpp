#ifndef MAXHAM_INITIAL_CONDITIONS_HPP
#define MAXHAM_INITIAL_CONDITIONS_HPP

#include "maxham/maxwell_field.hpp"
#include "maxham/verify.hpp"

namespace maxham::init {

struct PlaneWaveParams {
  std::array<int, 3> mode{1, 0, 0};  // integer wavenumbers per axis
  double amplitude = 1e-3;           // peak |E|
  std::array<double, 3> polarization{0.0, 1.0, 0.0};
};

std::array<double, 3> wave_vector(const GridSpec& g, const std::array<int, 3>& mode);
double plane_wave_omega(const GridSpec& g, const std::array<int, 3>& mode,
                        const Units& u);

// Vacuum plane wave on a flat metric in the A_0 = 0 gauge.
FieldState plane_wave_state(const GridSpec& g, const PlaneWaveParams& p,
                            const Units& u);
verify::EBState plane_wave_eb(const GridSpec& g, const PlaneWaveParams& p,
                              const Units& u);

struct GaussianPulseParams {
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double width = 0.08;
  double amplitude = 1e-3;
  std::array<double, 3> polarization{0.0, 1.0, 0.0};
};

// A_i = pol_i * amp * exp(-r^2/w^2) (covariant), p = 0: pure magnetic pulse,
// Gauss-consistent by construction. Flat metric.
FieldState gaussian_pulse_state(const GridSpec& g, const GaussianPulseParams& p);
verify::EBState gaussian_pulse_eb(const GridSpec& g, const GaussianPulseParams& p);

struct ChargeBlobParams {
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double width = 0.08;
  double amplitude = 1e-3;
};

// Static Gaussian charge blob: D = grad psi with psi = amp exp(-r^2/w^2),
// rho = lap(psi)/4pi in closed form (zero net charge on the torus up to the
// truncated tails). Flat metric.
FieldState charge_blob_state(const GridSpec& g, const ChargeBlobParams& p,
                             const MetricCache& mc, const Units& u);
CurrentSource charge_blob_source(const GridSpec& g, const ChargeBlobParams& p);

struct ManufacturedParams {
  double d_amplitude = 1e-3;
};

// Manufactured-solution data for the diag_profile metric family: D^a depends
// only on x_a, so the density-weighted divergence has a closed form and the
// matching rho is analytic.
FieldState manufactured_state(const GridSpec& g, const ManufacturedParams& p,
                              const MetricCache& mc, const Units& u);
CurrentSource manufactured_source(const GridSpec& g, const ManufacturedParams& p,
                                  const SpacetimeMetric& metric);

struct OscillatingSourceParams {
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double width = 0.1;
  double j_amplitude = 1e-4;
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  double omega = 4.0;
};

// Continuity-certified oscillating current: j = J(x) sin(w t) with rho
// integrated so that sqrt(3g) drho/dt + div_disc(sqrt(3g) j) = 0 holds at the
// discrete level, and rho(0) chosen to make the given initial state
// Gauss-consistent in the discrete sense.
CurrentSource oscillating_source(const OscillatingSourceParams& p,
                                 const FieldState& initial, const MetricCache& mc,
                                 const Units& u);

}  // namespace maxham::init

#endif
