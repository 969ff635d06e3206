#include "maxham/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maxham/snapshot.hpp"

namespace maxham {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "key '" + key + "': expected a number, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(line, "key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

long to_long(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "key '" + key + "': expected an integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(line, "key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& v) {
  std::istringstream is(v);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

template <std::size_t N>
std::array<double, N> to_dvec(const std::string& v, const std::string& key, int line) {
  const auto toks = split_ws(v);
  if (toks.size() != N)
    throw ConfigError(line, "key '" + key + "': expected " + std::to_string(N) +
                                " numbers, got " + std::to_string(toks.size()));
  std::array<double, N> out{};
  for (std::size_t m = 0; m < N; ++m) out[m] = to_double(toks[m], key, line);
  return out;
}

std::array<int, 3> to_ivec3(const std::string& v, const std::string& key, int line) {
  const auto toks = split_ws(v);
  if (toks.size() != 3)
    throw ConfigError(line, "key '" + key + "': expected 3 integers, got " +
                                std::to_string(toks.size()));
  std::array<int, 3> out{};
  for (int m = 0; m < 3; ++m)
    out[m] = static_cast<int>(to_long(toks[m], key, line));
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt3(const std::array<double, 3>& v) {
  return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]);
}

std::string fmt3i(const std::array<int, 3>& v) {
  return std::to_string(v[0]) + " " + std::to_string(v[1]) + " " +
         std::to_string(v[2]);
}

}  // namespace

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");

  Scenario s;
  s.provided_keys.push_back("(file)");  // marks file origin for validation
  std::string rawline;
  int line = 0;
  while (std::getline(in, rawline)) {
    ++line;
    const auto hash = rawline.find('#');
    if (hash != std::string::npos) rawline.erase(hash);
    const std::string text = trim(rawline);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (val.empty()) throw ConfigError(line, "key '" + key + "': empty value");
    s.provided_keys.push_back(key);

    if (key == "grid.n") {
      s.grid.n = to_ivec3(val, key, line);
    } else if (key == "grid.dx") {
      s.grid.dx = to_dvec<3>(val, key, line);
    } else if (key == "metric.family") {
      s.metric_family = val;
    } else if (key == "metric.diag") {
      s.metric_diag = to_dvec<4>(val, key, line);
    } else if (key == "metric.eps") {
      s.metric_eps = to_double(val, key, line);
    } else if (key == "init.type") {
      s.init_type = val;
    } else if (key == "init.mode") {
      s.plane_wave.mode = to_ivec3(val, key, line);
    } else if (key == "init.amplitude") {
      const double a = to_double(val, key, line);
      s.plane_wave.amplitude = a;
      s.pulse.amplitude = a;
      s.blob.amplitude = a;
      s.manufactured.d_amplitude = a;
    } else if (key == "init.polarization") {
      const auto p = to_dvec<3>(val, key, line);
      s.plane_wave.polarization = p;
      s.pulse.polarization = p;
    } else if (key == "init.center") {
      const auto c = to_dvec<3>(val, key, line);
      s.pulse.center = c;
      s.blob.center = c;
    } else if (key == "init.width") {
      const double w = to_double(val, key, line);
      s.pulse.width = w;
      s.blob.width = w;
    } else if (key == "source.type") {
      s.source_type = val;
    } else if (key == "source.center") {
      s.osc.center = to_dvec<3>(val, key, line);
    } else if (key == "source.width") {
      s.osc.width = to_double(val, key, line);
    } else if (key == "source.j_amplitude") {
      s.osc.j_amplitude = to_double(val, key, line);
    } else if (key == "source.direction") {
      s.osc.direction = to_dvec<3>(val, key, line);
    } else if (key == "source.omega") {
      s.osc.omega = to_double(val, key, line);
    } else if (key == "integrator") {
      if (val == "leapfrog")
        s.integrator = IntegratorKind::leapfrog;
      else if (val == "rk4")
        s.integrator = IntegratorKind::rk4;
      else
        throw ConfigError(line, "key 'integrator': expected leapfrog or rk4, got '" +
                                    val + "'");
    } else if (key == "cfl") {
      s.cfl = to_double(val, key, line);
    } else if (key == "dt") {
      s.dt = to_double(val, key, line);
    } else if (key == "steps") {
      s.steps = to_long(val, key, line);
    } else if (key == "gauge") {
      s.gauge = val;
    } else if (key == "gauge.lambda_const") {
      s.lambda_const = to_double(val, key, line);
    } else if (key == "monitor.cadence") {
      s.monitor_cadence = to_long(val, key, line);
    } else if (key == "monitor.ampere") {
      s.monitor_ampere = to_bool(val, key, line);
    } else if (key == "snapshot.cadence") {
      s.snapshot_cadence = to_long(val, key, line);
    } else if (key == "output") {
      s.output = val;
    } else if (key == "units.c") {
      s.c = to_double(val, key, line);
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  return s;
}

void validate_scenario(const Scenario& s) {
  // Configs built programmatically (no key list) skip the required-key check.
  if (!s.provided_keys.empty())
    for (const char* req : {"grid.n", "grid.dx", "init.type", "steps"})
      if (std::find(s.provided_keys.begin(), s.provided_keys.end(), req) ==
          s.provided_keys.end())
        throw ConfigError(0, "missing required key '" + std::string(req) + "'");
  try {
    s.grid.validate();
  } catch (const GridError& e) {
    throw ConfigError(0, e.what());
  }

  if (s.metric_family != "minkowski" && s.metric_family != "diagonal" &&
      s.metric_family != "diag_profile")
    throw ConfigError(0, "key 'metric.family': unknown family '" + s.metric_family +
                             "' (minkowski | diagonal | diag_profile)");
  if (s.metric_family == "diagonal") {
    if (!(s.metric_diag[0] > 0.0))
      throw ConfigError(0, "key 'metric.diag': g_00 must be positive");
    for (int a = 1; a < 4; ++a)
      if (!(s.metric_diag[a] < 0.0))
        throw ConfigError(0, "key 'metric.diag': spatial entries must be negative");
  }
  if (s.metric_family == "diag_profile" && !(std::abs(s.metric_eps) < 1.0))
    throw ConfigError(0, "key 'metric.eps': |eps| must be < 1");

  const bool flat = s.metric_family == "minkowski";
  if (s.init_type == "zero") {
    // always valid
  } else if (s.init_type == "plane_wave") {
    if (!flat)
      throw ConfigError(0, "key 'init.type': plane_wave requires metric.family = "
                           "minkowski");
    const auto& m = s.plane_wave.mode;
    if (m[0] == 0 && m[1] == 0 && m[2] == 0)
      throw ConfigError(0, "key 'init.mode': mode must be nonzero");
    const auto kv = init::wave_vector(s.grid, m);
    const auto& pol = s.plane_wave.polarization;
    const double kn = std::sqrt(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
    const double pn =
        std::sqrt(pol[0] * pol[0] + pol[1] * pol[1] + pol[2] * pol[2]);
    if (!(pn > 0.0))
      throw ConfigError(0, "key 'init.polarization': must be nonzero");
    const double dot =
        (kv[0] * pol[0] + kv[1] * pol[1] + kv[2] * pol[2]) / (kn * pn);
    if (std::abs(dot) > 1e-12)
      throw ConfigError(0, "key 'init.polarization': must be orthogonal to the "
                           "wave vector to 1e-12 (got cos angle " +
                               fmt(dot) + ")");
    if (std::abs(pn - 1.0) > 1e-12)
      throw ConfigError(0, "key 'init.polarization': must be a unit vector to "
                           "1e-12 (got norm " +
                               fmt(pn) + ")");
  } else if (s.init_type == "gaussian_pulse") {
    if (!(s.pulse.width > 0.0))
      throw ConfigError(0, "key 'init.width': must be positive");
  } else if (s.init_type == "gauss_blob") {
    if (!flat)
      throw ConfigError(0, "key 'init.type': gauss_blob requires metric.family = "
                           "minkowski (closed-form rho assumes a flat metric)");
    if (!(s.blob.width > 0.0))
      throw ConfigError(0, "key 'init.width': must be positive");
  } else if (s.init_type == "manufactured_charge") {
    if (s.metric_family != "diag_profile")
      throw ConfigError(0, "key 'init.type': manufactured_charge requires "
                           "metric.family = diag_profile");
  } else {
    throw ConfigError(0, "key 'init.type': unknown type '" + s.init_type +
                             "' (zero | plane_wave | gaussian_pulse | gauss_blob "
                             "| manufactured_charge)");
  }

  if (s.source_type != "auto" && s.source_type != "none" &&
      s.source_type != "oscillating")
    throw ConfigError(0, "key 'source.type': unknown type '" + s.source_type +
                             "' (auto | none | oscillating)");
  if (s.source_type == "oscillating") {
    if (!(s.osc.omega != 0.0))
      throw ConfigError(0, "key 'source.omega': must be nonzero");
    if (!(s.osc.width > 0.0))
      throw ConfigError(0, "key 'source.width': must be positive");
  }

  if (!(s.cfl > 0.0)) throw ConfigError(0, "key 'cfl': must be positive");
  if (s.dt && !(*s.dt > 0.0)) throw ConfigError(0, "key 'dt': must be positive");
  if (s.steps < 0) throw ConfigError(0, "key 'steps': must be >= 0");
  if (s.gauge != "lambda_zero" && s.gauge != "prescribed")
    throw ConfigError(0, "key 'gauge': expected lambda_zero or prescribed, got '" +
                             s.gauge + "'");
  if (s.monitor_cadence < 1)
    throw ConfigError(0, "key 'monitor.cadence': must be >= 1");
  if (s.snapshot_cadence < 0)
    throw ConfigError(0, "key 'snapshot.cadence': must be >= 0");
  if (!(s.c > 0.0)) throw ConfigError(0, "key 'units.c': must be positive");
  if (s.output.empty()) throw ConfigError(0, "key 'output': must be nonempty");
}

std::map<std::string, std::string> effective_config(const Scenario& s) {
  std::map<std::string, std::string> m;
  m["grid.n"] = fmt3i(s.grid.n);
  m["grid.dx"] = fmt3(s.grid.dx);
  m["metric.family"] = s.metric_family;
  if (s.metric_family == "diagonal")
    m["metric.diag"] = fmt(s.metric_diag[0]) + " " + fmt(s.metric_diag[1]) + " " +
                       fmt(s.metric_diag[2]) + " " + fmt(s.metric_diag[3]);
  if (s.metric_family == "diag_profile") m["metric.eps"] = fmt(s.metric_eps);
  m["init.type"] = s.init_type;
  if (s.init_type == "plane_wave") {
    m["init.mode"] = fmt3i(s.plane_wave.mode);
    m["init.amplitude"] = fmt(s.plane_wave.amplitude);
    m["init.polarization"] = fmt3(s.plane_wave.polarization);
  } else if (s.init_type == "gaussian_pulse") {
    m["init.amplitude"] = fmt(s.pulse.amplitude);
    m["init.polarization"] = fmt3(s.pulse.polarization);
    m["init.center"] = fmt3(s.pulse.center);
    m["init.width"] = fmt(s.pulse.width);
  } else if (s.init_type == "gauss_blob") {
    m["init.amplitude"] = fmt(s.blob.amplitude);
    m["init.center"] = fmt3(s.blob.center);
    m["init.width"] = fmt(s.blob.width);
  } else if (s.init_type == "manufactured_charge") {
    m["init.amplitude"] = fmt(s.manufactured.d_amplitude);
  }
  m["source.type"] = s.source_type;
  if (s.source_type == "oscillating") {
    m["source.center"] = fmt3(s.osc.center);
    m["source.width"] = fmt(s.osc.width);
    m["source.j_amplitude"] = fmt(s.osc.j_amplitude);
    m["source.direction"] = fmt3(s.osc.direction);
    m["source.omega"] = fmt(s.osc.omega);
  }
  m["integrator"] = s.integrator == IntegratorKind::leapfrog ? "leapfrog" : "rk4";
  m["cfl"] = fmt(s.cfl);
  if (s.dt) m["dt"] = fmt(*s.dt);
  m["steps"] = std::to_string(s.steps);
  m["gauge"] = s.gauge;
  if (s.gauge == "prescribed") m["gauge.lambda_const"] = fmt(s.lambda_const);
  m["monitor.cadence"] = std::to_string(s.monitor_cadence);
  m["monitor.ampere"] = s.monitor_ampere ? "true" : "false";
  m["snapshot.cadence"] = std::to_string(s.snapshot_cadence);
  m["output"] = s.output;
  m["units.c"] = fmt(s.c);
  return m;
}

SpacetimeMetric make_metric(const Scenario& s) {
  if (s.metric_family == "minkowski") return SpacetimeMetric::minkowski();
  if (s.metric_family == "diagonal") return SpacetimeMetric::diagonal(s.metric_diag);
  return SpacetimeMetric::diag_profile(
      s.metric_eps, {s.grid.length(0), s.grid.length(1), s.grid.length(2)});
}

FieldState make_initial_state(const Scenario& s, const MetricCache& mc) {
  const Units u{s.c};
  if (s.init_type == "zero") return FieldState::zero(s.grid);
  if (s.init_type == "plane_wave") return init::plane_wave_state(s.grid, s.plane_wave, u);
  if (s.init_type == "gaussian_pulse") return init::gaussian_pulse_state(s.grid, s.pulse);
  if (s.init_type == "gauss_blob")
    return init::charge_blob_state(s.grid, s.blob, mc, u);
  return init::manufactured_state(s.grid, s.manufactured, mc, u);
}

CurrentSource make_source(const Scenario& s, const FieldState& initial,
                          const MetricCache& mc) {
  const Units u{s.c};
  if (s.source_type == "oscillating")
    return init::oscillating_source(s.osc, initial, mc, u);
  if (s.source_type == "none") {
    CurrentSource src = CurrentSource::none();
    src.is_zero_hint = true;
    return src;
  }
  // auto: the natural companion of the initial condition
  if (s.init_type == "gauss_blob") return init::charge_blob_source(s.grid, s.blob);
  if (s.init_type == "manufactured_charge")
    return init::manufactured_source(s.grid, s.manufactured, make_metric(s));
  CurrentSource src = CurrentSource::none();
  src.is_zero_hint = true;
  return src;
}

std::string resolve_output_dir(const Scenario& s) {
  fs::path out(s.output);
  if (const char* root = std::getenv(kOutputRootEnv); root && *root && !out.is_absolute())
    out = fs::path(root) / out;
  return out.string();
}

RunArtifacts run_scenario(const Scenario& s) {
  validate_scenario(s);

  const Units u{s.c};
  const SpacetimeMetric metric = make_metric(s);
  const MetricCache mc(metric, s.grid);
  FieldState state = make_initial_state(s, mc);
  const CurrentSource src = make_source(s, state, mc);

  GaugePolicy gauge;
  if (s.gauge == "prescribed") {
    gauge.mode = GaugePolicy::Mode::prescribed;
    const double lc = s.lambda_const;
    gauge.prescribed_lambda = [lc](double, int, int, int) { return lc; };
  }

  StepParams sp;
  sp.cfl_limit = s.cfl;
  const double vmax = max_wave_speed(mc, u);
  sp.dt = s.dt ? *s.dt : s.cfl * s.grid.min_dx() / vmax;

  const std::string outdir = resolve_output_dir(s);
  fs::create_directories(outdir);

  RunSetup setup;
  setup.integrator = s.integrator;
  setup.step = sp;
  setup.steps = s.steps;
  setup.monitor_cadence = s.monitor_cadence;
  setup.monitor_ampere = s.monitor_ampere;
  setup.snapshot_cadence = s.snapshot_cadence;
  setup.snapshot_sink = [&outdir](const FieldState& st, long step) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06ld", step);
    write_snapshot(st, (fs::path(outdir) / name).string());
  };

  const auto t0 = std::chrono::steady_clock::now();
  MonitorLog log = run(state, mc, src, gauge, u, setup);
  const auto t1 = std::chrono::steady_clock::now();

  log.write_csv((fs::path(outdir) / "monitor.csv").string());
  write_snapshot(state, (fs::path(outdir) / "final").string());

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = effective_config(s);
  manifest["effective_dt"] = sp.dt;
  manifest["steps"] = s.steps;
  manifest["wall_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  double max_p0 = 0.0, max_gauss = 0.0, max_amp = 0.0;
  for (const auto& r : log.records) {
    max_p0 = std::max(max_p0, r.p0_inf);
    max_gauss = std::max(max_gauss, r.gauss_inf);
    if (std::isfinite(r.ampere_inf)) max_amp = std::max(max_amp, r.ampere_inf);
  }
  json summary;
  if (!log.records.empty()) {
    summary["initial_hamiltonian"] = log.records.front().hamiltonian;
    summary["final_hamiltonian"] = log.records.back().hamiltonian;
    summary["final_gauss_inf"] = log.records.back().gauss_inf;
    summary["final_time"] = log.records.back().time;
  }
  summary["max_p0_inf"] = max_p0;
  summary["max_gauss_inf"] = max_gauss;
  summary["max_ampere_inf"] = max_amp;
  manifest["summary"] = summary;
  std::ofstream mf(fs::path(outdir) / "manifest.json");
  mf << manifest.dump(2) << "\n";

  return RunArtifacts{std::move(log), outdir, sp.dt};
}

namespace {

struct RunDigest {
  std::string dir;
  std::string init_type;
  double min_dx = 0.0;
  double energy_drift = 0.0;  // max |H - H0| / max(|H0|, eps)
  double max_p0 = 0.0;
  double max_gauss = 0.0;
  double max_ampere = 0.0;
  double final_gauss = 0.0;
};

RunDigest read_run(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  if (!fs::exists(mpath))
    throw ManifestMissing("no manifest.json under '" + dir + "'");
  std::ifstream mf(mpath);
  json manifest = json::parse(mf);

  RunDigest d;
  d.dir = dir;
  d.init_type = manifest["config"].value("init.type", "?");
  {
    std::istringstream is(manifest["config"].value("grid.dx", "0 0 0"));
    double a = 0, b = 0, c = 0;
    is >> a >> b >> c;
    d.min_dx = std::min(a, std::min(b, c));
  }
  const auto& sum = manifest["summary"];
  d.max_p0 = sum.value("max_p0_inf", 0.0);
  d.max_gauss = sum.value("max_gauss_inf", 0.0);
  d.max_ampere = sum.value("max_ampere_inf", 0.0);
  d.final_gauss = sum.value("final_gauss_inf", 0.0);

  std::ifstream csv(fs::path(dir) / "monitor.csv");
  if (!csv) throw ManifestMissing("no monitor.csv under '" + dir + "'");
  std::string line;
  std::getline(csv, line);  // header
  double h0 = 0.0;
  bool first = true;
  while (std::getline(csv, line)) {
    std::istringstream is(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(is, tok, ','))
      row.push_back(tok.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : std::stod(tok));
    if (row.size() < 4) continue;
    if (first) {
      h0 = row[1];
      first = false;
    }
    d.energy_drift = std::max(
        d.energy_drift, std::abs(row[1] - h0) / std::max(std::abs(h0), 1e-300));
  }
  return d;
}

}  // namespace

std::string report_runs(const std::vector<std::string>& dirs,
                        const std::string& out_prefix) {
  std::vector<RunDigest> runs;
  runs.reserve(dirs.size());
  for (const auto& d : dirs) runs.push_back(read_run(d));
  std::sort(runs.begin(), runs.end(),
            [](const RunDigest& a, const RunDigest& b) { return a.min_dx > b.min_dx; });

  std::ostringstream csv, digest;
  csv << "dir,init,min_dx,energy_drift,max_p0,max_gauss,max_ampere,final_gauss,"
         "gauss_order,ampere_order\n";
  digest << "run report (" << runs.size() << " runs)\n";
  for (std::size_t m = 0; m < runs.size(); ++m) {
    const RunDigest& r = runs[m];
    std::string gorder = "", aorder = "";
    if (m > 0 && runs[m - 1].min_dx > r.min_dx) {
      const RunDigest& coarse = runs[m - 1];
      const double lr = std::log(coarse.min_dx / r.min_dx);
      if (r.final_gauss > 0.0 && coarse.final_gauss > 0.0)
        gorder = fmt(std::log(coarse.final_gauss / r.final_gauss) / lr);
      if (r.max_ampere > 0.0 && coarse.max_ampere > 0.0)
        aorder = fmt(std::log(coarse.max_ampere / r.max_ampere) / lr);
    }
    csv << r.dir << "," << r.init_type << "," << fmt(r.min_dx) << ","
        << fmt(r.energy_drift) << "," << fmt(r.max_p0) << "," << fmt(r.max_gauss)
        << "," << fmt(r.max_ampere) << "," << fmt(r.final_gauss) << "," << gorder
        << "," << aorder << "\n";
    digest << "  " << r.dir << " [" << r.init_type << ", dx=" << fmt(r.min_dx)
           << "]\n"
           << "    energy drift      " << fmt(r.energy_drift) << "\n"
           << "    max |p0|          " << fmt(r.max_p0) << "\n"
           << "    max gauss resid   " << fmt(r.max_gauss) << "\n"
           << "    max ampere resid  " << fmt(r.max_ampere) << "\n";
    if (!gorder.empty())
      digest << "    observed gauss order vs previous  " << gorder << "\n";
    if (!aorder.empty())
      digest << "    observed ampere order vs previous " << aorder << "\n";
  }

  {
    std::ofstream out(out_prefix + "_table.csv");
    out << csv.str();
  }
  std::ofstream out(out_prefix + "_digest.txt");
  out << digest.str();
  return digest.str();
}

}  // namespace maxham
