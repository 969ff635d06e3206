#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxham/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int do_validate(const std::string& config) {
  maxham::Scenario s = maxham::parse_scenario(config);
  maxham::validate_scenario(s);
  std::printf("ok: %s\n", config.c_str());
  return 0;
}

int do_run(const std::string& config) {
  maxham::Scenario s = maxham::parse_scenario(config);
  maxham::validate_scenario(s);
  const maxham::RunArtifacts art = maxham::run_scenario(s);
  std::printf("wrote %s (%zu monitor rows, dt = %.6g)\n", art.outdir.c_str(),
              art.log.records.size(), art.effective_dt);
  if (!art.log.records.empty()) {
    const auto& last = art.log.records.back();
    std::printf("final: t = %.6g  H = %.9g  |p0| = %.3g  |gauss| = %.3g\n",
                last.time, last.hamiltonian, last.p0_inf, last.gauss_inf);
  }
  return 0;
}

int do_report(const std::vector<std::string>& dirs, const std::string& prefix) {
  const std::string digest = maxham::report_runs(dirs, prefix);
  std::fputs(digest.c_str(), stdout);
  std::printf("wrote %s_table.csv and %s_digest.txt\n", prefix.c_str(),
              prefix.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxham: canonical Maxwell field evolution on static metrics"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> dirs;
  std::string prefix = "report";

  CLI::App* run = app.add_subcommand("run", "execute a scenario config");
  run->add_option("config", config, "scenario config file")->required();

  CLI::App* validate =
      app.add_subcommand("validate", "parse and validate a scenario config");
  validate->add_option("config", config, "scenario config file")->required();

  CLI::App* report =
      app.add_subcommand("report", "summarize finished run directories");
  report->add_option("dirs", dirs, "run output directories")->required();
  report->add_option("-o,--output", prefix, "output file prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config);
    if (validate->parsed()) return do_validate(config);
    return do_report(dirs, prefix);
  } catch (const maxham::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const maxham::ManifestMissing& e) {
    std::fprintf(stderr, "report error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }
}
