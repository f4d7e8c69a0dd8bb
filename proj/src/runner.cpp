#include "dsmlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace dsm {

int status_exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Finished: return kExitOk;
    case RunStatus::Overflow: return kExitOverflow;
    case RunStatus::DtCollapse: return kExitDtCollapse;
    case RunStatus::Running: return kExitFailure;
  }
  return kExitFailure;
}

Field build_initial(const RunConfig& cfg, GridPtr grid, const HelmholtzOperator& H) {
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Constant:
    case InitialSpec::Kind::GaussianBump:
    case InitialSpec::Kind::Perturbed: {
      ProfileSpec p = cfg.initial.profile;
      p.kind = cfg.initial.kind == InitialSpec::Kind::Constant ? ProfileSpec::Kind::Constant
               : cfg.initial.kind == InitialSpec::Kind::GaussianBump
                   ? ProfileSpec::Kind::GaussianBump
                   : ProfileSpec::Kind::Perturbed;
      return standard_profile(p, grid);
    }
    case InitialSpec::Kind::Blowup:
      return construct_blowup(cfg.initial.recipe, grid, H).u0;
  }
  throw std::logic_error("build_initial: unreachable");
}

namespace {

std::map<std::string, std::string> base_metadata(const RunConfig& cfg, const GridPtr& grid) {
  std::map<std::string, std::string> md;
  md["config"] = config_hash(cfg);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", grid->domain_measure());
  md["domain_measure"] = buf;
  std::snprintf(buf, sizeof buf, "%.17g", cfg.mu);
  md["mu"] = buf;
  md["geometry"] = to_string(cfg.grid.geometry);
  md["motility"] = to_string(cfg.motility.kind);
  return md;
}

}  // namespace

RunResult run_config(const RunConfig& cfg, const std::optional<std::filesystem::path>& resume,
                     bool keep_rows, bool write_outputs) {
  if (cfg.mode != RunConfig::Mode::Run)
    throw std::invalid_argument("run_config: config mode is not 'run'");
  cfg.validate();

  GridPtr grid = build_grid(cfg.grid.geometry, cfg.grid.extent, cfg.grid.n_cells);
  Motility m = cfg.motility.instantiate();
  Simulation sim(grid, m, cfg.mu, cfg.scheme);

  if (resume) {
    const Checkpoint ck = read_checkpoint(*resume);
    if (ck.config_hash != config_hash(cfg))
      throw std::invalid_argument("resume: checkpoint was written by a different config (hash " +
                                  ck.config_hash + " != " + config_hash(cfg) + ")");
    if (ck.n_cells != grid->n_cells || ck.geometry != grid->geometry)
      throw std::invalid_argument("resume: checkpoint grid mismatch");
    sim.restore(ck.u, ck.t, ck.step);
  } else {
    sim.reset(build_initial(cfg, grid, sim.helmholtz()));
  }

  const std::filesystem::path out(cfg.out_dir);
  RunResult result;
  result.series_path = out / "series.csv";
  result.checkpoint_path = out / "checkpoint.chk";

  TrajectoryMonitor monitor(cfg.diagnostics, m, cfg.mu, sim.helmholtz());
  std::optional<SeriesWriter> writer;
  if (write_outputs)
    writer.emplace(result.series_path, record_columns(cfg.diagnostics), base_metadata(cfg, grid));

  // snapshot times are taken at the first sample with t >= requested
  std::vector<double> snap_times = cfg.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  size_t next_snap = 0;

  const std::string hash = config_hash(cfg);
  Simulation::Hooks hooks;
  hooks.sample_every = cfg.sample_every;
  hooks.on_sample = [&](const SimState& cur, const SimState& prev, double dt) {
    const DiagnosticsRecord r = monitor.record(cur, prev, dt);
    if (writer) writer->append(record_values(r));
    while (write_outputs && next_snap < snap_times.size() && cur.t >= snap_times[next_snap]) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_t%.6g.csv", snap_times[next_snap]);
      write_snapshot(out / name, cur.u, cur.v, base_metadata(cfg, grid));
      ++next_snap;
    }
  };
  hooks.checkpoint_every = cfg.checkpoint_every;
  hooks.on_checkpoint = [&](const SimState& st) {
    if (!write_outputs) return;
    char name[64];
    std::snprintf(name, sizeof name, "checkpoint_step%ld.chk", st.step);
    write_checkpoint(out / name, {hash, grid->geometry, grid->extent, grid->n_cells, st.t,
                                  st.step, st.u.values});
  };

  result.status = sim.run(hooks);
  result.final_state = sim.state();
  if (write_outputs) {
    writer->flush();
    write_checkpoint(result.checkpoint_path,
                     {hash, grid->geometry, grid->extent, grid->n_cells, sim.state().t,
                      sim.state().step, sim.state().u.values});
  }
  if (keep_rows) result.rows = monitor.rows();
  return result;
}

SteadyBranch run_steady(const RunConfig& cfg, bool write_outputs) {
  GridPtr grid = build_grid(cfg.grid.geometry, cfg.grid.extent, cfg.grid.n_cells);
  SteadyBranch branch = continuation_sweep(cfg.lambda_start, cfg.lambda_end, cfg.lambda_steps, grid);
  if (write_outputs)
    write_branch_csv(std::filesystem::path(cfg.out_dir) / "branch.csv", branch.entries,
                     base_metadata(cfg, grid));
  return branch;
}

BlowupData run_construct(const RunConfig& cfg, bool write_outputs) {
  if (cfg.initial.kind != InitialSpec::Kind::Blowup)
    throw std::invalid_argument("construct mode expects [initial] kind = blowup");
  GridPtr grid = build_grid(cfg.grid.geometry, cfg.grid.extent, cfg.grid.n_cells);
  HelmholtzOperator H(grid);
  BlowupData d = construct_blowup(cfg.initial.recipe, grid, H);
  if (write_outputs) {
    auto md = base_metadata(cfg, grid);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d.a);
    md["a"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", integrate(d.u0));
    md["mass"] = buf;
    write_snapshot(std::filesystem::path(cfg.out_dir) / "initial.csv", d.u0, d.v0, md);
  }
  return d;
}

AsymptoticsReport run_asymptotics(const RunConfig& cfg, bool write_outputs) {
  GridPtr grid = build_grid(cfg.grid.geometry, cfg.grid.extent, cfg.grid.n_cells);
  HelmholtzOperator H(grid);
  AsymptoticsReport rep =
      verify_construction_asymptotics(cfg.asym_Lambda, cfg.asym_lambdas, grid, H, cfg.asym_delta);
  if (write_outputs)
    write_asymptotics_csv(std::filesystem::path(cfg.out_dir) / "asymptotics.csv", rep,
                          base_metadata(cfg, grid));
  return rep;
}

namespace {

int run_one_entry(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                  std::string& status, std::string& info) {
  try {
    RunConfig cfg = parse_config_file(config_path);
    // each entry gets its own output directory under the sweep root
    cfg.out_dir = (out_dir / config_path.stem()).string();
    switch (cfg.mode) {
      case RunConfig::Mode::Run: {
        const RunResult r = run_config(cfg);
        status = to_string(r.status);
        return status_exit_code(r.status);
      }
      case RunConfig::Mode::Steady: {
        const SteadyBranch b = run_steady(cfg);
        char buf[64];
        std::snprintf(buf, sizeof buf, "best_energy=%.12g", b.best_energy());
        info = buf;
        status = "finished";
        return kExitOk;
      }
      case RunConfig::Mode::Construct: {
        run_construct(cfg);
        status = "finished";
        return kExitOk;
      }
      case RunConfig::Mode::Asymptotics: {
        const AsymptoticsReport rep = run_asymptotics(cfg);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "entropy_slope=%.6g interaction_slope=%.6g energy_slope=%.6g",
                      rep.entropy_slope, rep.interaction_slope, rep.energy_slope);
        info = buf;
        status = rep.entropy_ok && rep.interaction_ok && rep.energy_ok ? "finished"
                                                                       : "slopes-out-of-bracket";
        return kExitOk;
      }
    }
    status = "unknown-mode";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    status = std::string("config-error: ") + e.what();
    return kExitConfigError;
  } catch (const std::exception& e) {
    status = std::string("error: ") + e.what();
    return kExitFailure;
  }
}

}  // namespace

std::vector<SweepEntryResult> run_sweep(const std::filesystem::path& manifest, int jobs,
                                        const std::filesystem::path& out_dir) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest.string());
  std::vector<std::filesystem::path> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok) {
      std::filesystem::path p(tok);
      if (p.is_relative()) p = manifest.parent_path() / p;
      entries.push_back(p);
    }
  }

  std::vector<SweepEntryResult> results(entries.size());
  std::atomic<size_t> next{0};
  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= entries.size()) return;
        results[i].config_path = entries[i].string();
        results[i].exit_code =
            run_one_entry(entries[i], out_dir, results[i].status, results[i].info);
      }
    });
  }
  for (auto& th : pool) th.join();

  std::filesystem::create_directories(out_dir);
  FILE* f = std::fopen((out_dir / "summary.csv").string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write sweep summary");
  std::fprintf(f, "# dsmlab-sweep v1\n");
  std::fprintf(f, "# written = %s\n", timestamp_now().c_str());
  std::fprintf(f, "config,exit_code,status,info\n");
  for (const auto& r : results)
    std::fprintf(f, "%s,%d,%s,%s\n", r.config_path.c_str(), r.exit_code, r.status.c_str(),
                 r.info.c_str());
  std::fclose(f);
  return results;
}

}  // namespace dsm
