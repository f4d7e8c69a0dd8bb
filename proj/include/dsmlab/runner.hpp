#pragma once

#include <filesystem>
#include <optional>

#include "dsmlab/checks.hpp"
#include "dsmlab/config.hpp"
#include "dsmlab/io.hpp"
#include "dsmlab/steady.hpp"

namespace dsm {

/// Initial data from the config's [initial] section.
Field build_initial(const RunConfig& cfg, GridPtr grid, const HelmholtzOperator& H);

struct RunResult {
  RunStatus status = RunStatus::Finished;
  SimState final_state;
  std::vector<DiagnosticsRecord> rows;
  std::filesystem::path series_path;
  std::filesystem::path checkpoint_path;
};

/// Executes a Mode::Run config: series.csv, optional snapshots and periodic
/// checkpoints, final checkpoint. `resume` continues from a checkpoint written
/// by a run with the identical config (hash-verified). With `keep_rows` the
/// sampled records are also returned in memory.
RunResult run_config(const RunConfig& cfg, const std::optional<std::filesystem::path>& resume = {},
                     bool keep_rows = false, bool write_outputs = true);

/// Mode::Steady: continuation sweep, branch.csv.
SteadyBranch run_steady(const RunConfig& cfg, bool write_outputs = true);

/// Mode::Construct: build the recipe data, write u0/v0 snapshot + report.
BlowupData run_construct(const RunConfig& cfg, bool write_outputs = true);

/// Mode::Asymptotics: the log-lambda slope fits, asymptotics.csv.
AsymptoticsReport run_asymptotics(const RunConfig& cfg, bool write_outputs = true);

/// Sweep manifest: one config path per line ('#' comments). Each entry runs in
/// isolation (failures never abort siblings) with at most `jobs` in flight;
/// per-entry exit codes are aggregated into summary.csv under `out_dir`.
struct SweepEntryResult {
  std::string config_path;
  int exit_code = 0;
  std::string status;
  std::string info;  // mode-specific: fitted slopes, best branch energy, ...
};
std::vector<SweepEntryResult> run_sweep(const std::filesystem::path& manifest, int jobs,
                                        const std::filesystem::path& out_dir);

/// Exit-code taxonomy (documented in the README; sweep and CI depend on it).
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // unexpected internal failure
  kExitOverflow = 2,     // run hit the overflow cap
  kExitDtCollapse = 3,   // required dt fell below dt_min
  kExitConfigError = 4,  // config parse/validation failure
  kExitIoError = 5,      // filesystem failure
  kExitCheckFailed = 6,  // cmd_check found failures
};

int status_exit_code(RunStatus s);

}  // namespace dsm
