// Batch front door: run / check / sweep / steady / construct.
//
// Exit codes: 0 finished, 1 internal failure, 2 overflow, 3 dt collapse,
// 4 config error, 5 I/O error, 6 check failures.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dsmlab/runner.hpp"

using namespace dsm;

namespace {

RunConfig load_config(const std::string& path, const std::string& out_override) {
  RunConfig cfg = parse_config_file(path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  return cfg;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& resume_path) {
  const RunConfig cfg = load_config(config_path, out_override);
  std::optional<std::filesystem::path> resume;
  if (!resume_path.empty()) resume = resume_path;
  const RunResult r = run_config(cfg, resume);
  std::fprintf(stdout, "run: %s after %ld steps, t=%.10g (series: %s)\n", to_string(r.status),
               r.final_state.step, r.final_state.t, r.series_path.string().c_str());
  if (r.status != RunStatus::Finished)
    std::fprintf(stderr, "dsmlab run: terminated with status %s\n", to_string(r.status));
  return status_exit_code(r.status);
}

int cmd_check(const std::vector<std::string>& series_paths, const std::string& checks_path) {
  std::ifstream in(checks_path);
  if (!in) throw std::runtime_error("cannot open check spec: " + checks_path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto checks = parse_checks(ss.str());

  std::vector<CheckResult> all;
  for (const auto& sp : series_paths) {
    const SeriesTable table = read_series(sp);
    const auto res = run_checks(table, std::filesystem::path(sp).filename().string(), checks);
    all.insert(all.end(), res.begin(), res.end());
  }
  const int failures = print_check_report(all, stdout);
  if (failures) std::fprintf(stderr, "dsmlab check: %d failure(s)\n", failures);
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const std::string& manifest, int jobs, const std::string& out_dir) {
  const auto results = run_sweep(manifest, jobs, out_dir);
  int bad = 0;
  for (const auto& r : results) {
    std::fprintf(stdout, "%-40s exit=%d %s %s\n", r.config_path.c_str(), r.exit_code,
                 r.status.c_str(), r.info.c_str());
    if (r.exit_code != 0) ++bad;
  }
  std::fprintf(stdout, "sweep: %zu entries, %d failed (summary: %s)\n", results.size(), bad,
               (std::filesystem::path(out_dir) / "summary.csv").string().c_str());
  if (bad) std::fprintf(stderr, "dsmlab sweep: %d entr%s failed\n", bad, bad == 1 ? "y" : "ies");
  return bad == 0 ? kExitOk : kExitFailure;
}

int cmd_steady(const std::string& config_path, const std::string& out_override) {
  const RunConfig cfg = load_config(config_path, out_override);
  const SteadyBranch b = run_steady(cfg);
  int conv = 0;
  for (const auto& e : b.entries) conv += e.converged;
  std::fprintf(stdout, "steady: %d/%zu converged, best E=%.12g (branch: %s)\n", conv,
               b.entries.size(), b.best_energy(),
               (std::filesystem::path(cfg.out_dir) / "branch.csv").string().c_str());
  return kExitOk;
}

int cmd_construct(const std::string& config_path, const std::string& out_override) {
  const RunConfig cfg = load_config(config_path, out_override);
  const BlowupData d = run_construct(cfg);
  std::fprintf(stdout, "construct: a=%.12g mass=%.12g v0_max=%.12g (initial: %s)\n", d.a,
               integrate(d.u0), max_value(d.v0),
               (std::filesystem::path(cfg.out_dir) / "initial.csv").string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsmlab: density-suppressed motility chemotaxis laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, resume_path, checks_path, manifest;
  std::string sweep_out = "sweep_out";
  std::vector<std::string> series_paths;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "integrate a configured run");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--resume", resume_path, "checkpoint to resume from");

  auto* check = app.add_subcommand("check", "evaluate assertions over series files");
  check->add_option("--series", series_paths, "series.csv paths")->required()->expected(-1);
  check->add_option("--checks", checks_path, "check-spec file")->required();

  auto* sweep = app.add_subcommand("sweep", "run a manifest of configs");
  sweep->add_option("--manifest", manifest, "manifest file (one config path per line)")->required();
  sweep->add_option("--jobs", jobs, "parallel workers")->default_val(1);
  sweep->add_option("--out", sweep_out, "sweep output directory");

  auto* steady = app.add_subcommand("steady", "continuation sweep of the stationary problem");
  steady->add_option("--config", config_path, "config file")->required();
  steady->add_option("--out", out_dir, "output directory override");

  auto* construct = app.add_subcommand("construct", "build super-critical initial data");
  construct->add_option("--config", config_path, "config file")->required();
  construct->add_option("--out", out_dir, "output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, resume_path);
    if (check->parsed()) return cmd_check(series_paths, checks_path);
    if (sweep->parsed()) return cmd_sweep(manifest, jobs, sweep_out);
    if (steady->parsed()) return cmd_steady(config_path, out_dir);
    if (construct->parsed()) return cmd_construct(config_path, out_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "dsmlab: config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "dsmlab: io error: %s\n", e.what());
    return kExitIoError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dsmlab: error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
