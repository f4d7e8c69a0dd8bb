#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsmlab/config.hpp"
#include "dsmlab/diagnostics.hpp"

namespace dsm {

/// Streaming CSV writer for diagnostics series. Layout:
///   # dsmlab-series v1
///   # config = <hash>
///   # domain_measure = <|Omega|>  # mu = ...   (metadata the checks need)
///   # written = <timestamp>                     (only non-deterministic line)
///   header row, then one row per sample, %.17g.
class SeriesWriter {
 public:
  SeriesWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::map<std::string, std::string>& metadata);
  ~SeriesWriter();
  void append(const std::vector<double>& values);
  void flush();

 private:
  FILE* f_ = nullptr;
  size_t n_cols_;
};

/// In-memory series table (for cmd_check and tests).
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  int column_index(const std::string& name) const;  // -1 if absent
  std::vector<double> column(const std::string& name) const;  // throws on schema miss
  double metadata_num(const std::string& key, double fallback) const;
};

SeriesTable read_series(const std::filesystem::path& path);

void write_snapshot(const std::filesystem::path& path, const Field& u, const Field& v,
                    const std::map<std::string, std::string>& metadata);

/// Checkpoint container: text header + one hexfloat per cell, bit-exact.
struct Checkpoint {
  std::string config_hash;
  Geometry geometry = Geometry::Disk;
  double extent = 1.0;
  int n_cells = 0;
  double t = 0;
  long step = 0;
  std::vector<double> u;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::filesystem::path& path);

void write_branch_csv(const std::filesystem::path& path,
                      const std::vector<struct SteadyEntry>& entries,
                      const std::map<std::string, std::string>& metadata);

void write_asymptotics_csv(const std::filesystem::path& path, const struct AsymptoticsReport& rep,
                           const std::map<std::string, std::string>& metadata);

std::string timestamp_now();

}  // namespace dsm
