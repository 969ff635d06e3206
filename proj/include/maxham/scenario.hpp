#ifndef MAXHAM_SCENARIO_HPP
#define MAXHAM_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maxham/initial_conditions.hpp"
#include "maxham/integrate.hpp"

namespace maxham {

inline constexpr const char* kVersion = "maxham 0.1.0";
inline constexpr const char* kOutputRootEnv = "MAXHAM_OUTPUT_ROOT";

struct ConfigError : std::runtime_error {
  int line;  // 0 when not tied to a specific line
  ConfigError(int l, const std::string& msg)
      : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": " + msg : msg),
        line(l) {}
};

struct ManifestMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed and defaulted scenario. The config file is a flat "key = value"
// format with '#' comments; vectors are whitespace-separated.
struct Scenario {
  GridSpec grid{{32, 32, 32}, {1.0 / 32, 1.0 / 32, 1.0 / 32}};

  std::string metric_family = "minkowski";  // minkowski | diagonal | diag_profile
  std::array<double, 4> metric_diag{1.0, -1.0, -1.0, -1.0};
  double metric_eps = 0.1;

  std::string init_type = "zero";  // zero | plane_wave | gaussian_pulse |
                                   // gauss_blob | manufactured_charge
  init::PlaneWaveParams plane_wave;
  init::GaussianPulseParams pulse;
  init::ChargeBlobParams blob;
  init::ManufacturedParams manufactured;

  std::string source_type = "auto";  // auto | none | oscillating
  init::OscillatingSourceParams osc;

  IntegratorKind integrator = IntegratorKind::leapfrog;
  double cfl = 0.5;
  std::optional<double> dt;
  long steps = 0;

  std::string gauge = "lambda_zero";  // lambda_zero | prescribed
  double lambda_const = 0.0;          // prescribed gauge: constant lambda

  long monitor_cadence = 1;
  bool monitor_ampere = true;
  long snapshot_cadence = 0;
  std::string output = "run";
  double c = 1.0;  // units: c in the chosen scale (1 = desk units)

  // Keys actually present in the config file; validation requires grid.n,
  // grid.dx, init.type and steps to be explicit.
  std::vector<std::string> provided_keys;
};

Scenario parse_scenario(const std::string& path);

// Every effective parameter (defaults included) as flat key/value strings;
// echoed verbatim into the run manifest.
std::map<std::string, std::string> effective_config(const Scenario& s);

// Throws ConfigError naming the offending key for every violated invariant.
void validate_scenario(const Scenario& s);

SpacetimeMetric make_metric(const Scenario& s);
FieldState make_initial_state(const Scenario& s, const MetricCache& mc);
CurrentSource make_source(const Scenario& s, const FieldState& initial,
                          const MetricCache& mc);

// Output directory after applying the MAXHAM_OUTPUT_ROOT override.
std::string resolve_output_dir(const Scenario& s);

struct RunArtifacts {
  MonitorLog log;
  std::string outdir;
  double effective_dt = 0.0;
};

// Executes the scenario: writes monitor.csv, manifest.json and snapshots
// under the resolved output directory.
RunArtifacts run_scenario(const Scenario& s);

// Reads run directories (manifest + monitor) and writes a plain-text digest
// and a CSV table (convergence orders, energy and constraint drift) under
// out_prefix. Returns the digest text.
std::string report_runs(const std::vector<std::string>& dirs,
                        const std::string& out_prefix);

}  // namespace maxham

#endif
