#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dsmlab/diagnostics.hpp"
#include "dsmlab/dynamics.hpp"
#include "dsmlab/initdata.hpp"
#include "dsmlab/motility.hpp"

namespace dsm {

struct GridSpec {
  Geometry geometry = Geometry::Disk;
  double extent = 1.0;
  int n_cells = 512;
};

struct MotilitySpec {
  MotilityKind kind = MotilityKind::Exp;
  double c0 = 1.0;  // defaults are a choice, not paper-given; keep them visible
  double k = 1.0;
  double s_min = -1.0;  // < 0: kind default

  Motility instantiate() const { return Motility::make(kind, c0, k, s_min); }
};

struct InitialSpec {
  enum class Kind { Constant, GaussianBump, Perturbed, Blowup };
  Kind kind = Kind::Constant;
  ProfileSpec profile;    // for the standard kinds
  BlowupRecipe recipe;    // for Blowup
};

struct RunConfig {
  enum class Mode { Run, Construct, Steady, Asymptotics };
  Mode mode = Mode::Run;

  GridSpec grid;
  MotilitySpec motility;
  double mu = 0.0;
  InitialSpec initial;
  SchemeConfig scheme;

  DiagnosticsConfig diagnostics;
  long sample_every = 100;

  std::string out_dir = "out";
  std::vector<double> snapshot_times;
  long checkpoint_every = 0;
  unsigned long seed = 0;  // reserved; the core is deterministic

  // steady mode
  double lambda_start = 1.0, lambda_end = 3.0;
  int lambda_steps = 8;

  // asymptotics mode
  double asym_Lambda = 0.0;
  std::vector<double> asym_lambdas;
  double asym_delta = 0.05;

  void validate() const;  // throws std::invalid_argument
};

/// key = value sections; throws std::invalid_argument with file/line context
/// on malformed input or unknown keys.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config_file(const std::filesystem::path& p);

/// Canonical serialization: fixed section and key order, full-precision
/// numbers. parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& c);

/// FNV-1a over the canonical serialization, as a fixed-width hex string.
std::string config_hash(const RunConfig& c);

const char* to_string(Geometry g);
const char* to_string(MotilityKind k);
const char* to_string(Stepper s);
const char* to_string(AdvectionScheme a);
const char* to_string(RunConfig::Mode m);
const char* to_string(InitialSpec::Kind k);

}  // namespace dsm
