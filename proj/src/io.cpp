#include "dsmlab/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dsmlab/initdata.hpp"
#include "dsmlab/steady.hpp"

namespace dsm {

namespace {

void write_metadata(FILE* f, const std::map<std::string, std::string>& metadata) {
  for (const auto& [k, v] : metadata) std::fprintf(f, "# %s = %s\n", k.c_str(), v.c_str());
  // timestamp lives on its own comment line so outputs stay byte-comparable
  std::fprintf(f, "# written = %s\n", timestamp_now().c_str());
}

FILE* open_or_throw(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

}  // namespace

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path,
                           const std::vector<std::string>& columns,
                           const std::map<std::string, std::string>& metadata)
    : n_cols_(columns.size()) {
  f_ = open_or_throw(path);
  std::fprintf(f_, "# dsmlab-series v1\n");
  write_metadata(f_, metadata);
  for (size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fprintf(f_, "\n");
}

SeriesWriter::~SeriesWriter() {
  if (f_) std::fclose(f_);
}

void SeriesWriter::append(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw std::logic_error("SeriesWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%.17g", i ? "," : "", values[i]);
  std::fprintf(f_, "\n");
}

void SeriesWriter::flush() {
  if (f_) std::fflush(f_);
}

int SeriesTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> SeriesTable::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw std::runtime_error("series schema error: missing column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<size_t>(idx)]);
  return out;
}

double SeriesTable::metadata_num(const std::string& key, double fallback) const {
  const auto it = metadata.find(key);
  if (it == metadata.end()) return fallback;
  return std::stod(it->second);
}

SeriesTable read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series: " + path.string());
  SeriesTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string k = line.substr(1, eq - 1);
        std::string v = line.substr(eq + 1);
        const auto strip = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
          while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
        };
        strip(k);
        strip(v);
        t.metadata[k] = v;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.columns = cells;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(c == "nan" || c == "-nan" ? NAN : std::stod(c));
    if (row.size() != t.columns.size())
      throw std::runtime_error("series schema error: ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("series schema error: no header in " + path.string());
  return t;
}

void write_snapshot(const std::filesystem::path& path, const Field& u, const Field& v,
                    const std::map<std::string, std::string>& metadata) {
  FILE* f = open_or_throw(path);
  std::fprintf(f, "# dsmlab-snapshot v1\n");
  write_metadata(f, metadata);
  std::fprintf(f, "xi,u,v\n");
  for (int i = 0; i < u.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", u.grid->cell_centers[i], u[i], v[i]);
  std::fclose(f);
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  FILE* f = open_or_throw(path);
  std::fprintf(f, "# dsmlab-checkpoint v1\n");
  std::fprintf(f, "config = %s\n", c.config_hash.c_str());
  std::fprintf(f, "geometry = %s\n", to_string(c.geometry));
  std::fprintf(f, "extent = %a\n", c.extent);
  std::fprintf(f, "n_cells = %d\n", c.n_cells);
  std::fprintf(f, "t = %a\n", c.t);
  std::fprintf(f, "step = %ld\n", c.step);
  std::fprintf(f, "u:\n");
  for (double x : c.u) std::fprintf(f, "%a\n", x);
  std::fclose(f);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  Checkpoint c;
  std::string line;
  if (!std::getline(in, line) || line != "# dsmlab-checkpoint v1")
    throw std::runtime_error("not a dsmlab checkpoint: " + path.string());
  bool in_values = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (in_values) {
      c.u.push_back(std::strtod(line.c_str(), nullptr));
      continue;
    }
    if (line == "u:") {
      in_values = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed checkpoint line: " + line);
    std::string k = line.substr(0, eq);
    std::string v = line.substr(eq + 1);
    const auto strip = [](std::string& s) {
      while (!s.empty() && s.front() == ' ') s.erase(s.begin());
      while (!s.empty() && s.back() == ' ') s.pop_back();
    };
    strip(k);
    strip(v);
    if (k == "config")
      c.config_hash = v;
    else if (k == "geometry")
      c.geometry = (v == "disk") ? Geometry::Disk : Geometry::Interval;
    else if (k == "extent")
      c.extent = std::strtod(v.c_str(), nullptr);
    else if (k == "n_cells")
      c.n_cells = std::stoi(v);
    else if (k == "t")
      c.t = std::strtod(v.c_str(), nullptr);
    else if (k == "step")
      c.step = std::stol(v);
    else
      throw std::runtime_error("unknown checkpoint key: " + k);
  }
  if (static_cast<int>(c.u.size()) != c.n_cells)
    throw std::runtime_error("checkpoint value count mismatch");
  return c;
}

void write_branch_csv(const std::filesystem::path& path, const std::vector<SteadyEntry>& entries,
                      const std::map<std::string, std::string>& metadata) {
  FILE* f = open_or_throw(path);
  std::fprintf(f, "# dsmlab-branch v1\n");
  write_metadata(f, metadata);
  std::fprintf(f, "Lambda,energy,residual,converged,v_max,iterations\n");
  for (const auto& e : entries)
    std::fprintf(f, "%.17g,%.17g,%.17g,%d,%.17g,%d\n", e.Lambda, e.energy, e.residual,
                 e.converged ? 1 : 0, e.v_max, e.iterations);
  std::fclose(f);
}

void write_asymptotics_csv(const std::filesystem::path& path, const AsymptoticsReport& rep,
                           const std::map<std::string, std::string>& metadata) {
  FILE* f = open_or_throw(path);
  std::fprintf(f, "# dsmlab-asymptotics v1\n");
  auto md = metadata;
  md["Lambda"] = std::to_string(rep.Lambda);
  md["entropy_slope"] = std::to_string(rep.entropy_slope);
  md["interaction_slope"] = std::to_string(rep.interaction_slope);
  md["energy_slope"] = std::to_string(rep.energy_slope);
  md["entropy_bound"] = std::to_string(rep.entropy_bound);
  md["interaction_bound"] = std::to_string(rep.interaction_bound);
  md["energy_bound"] = std::to_string(rep.energy_bound);
  write_metadata(f, md);
  for (const auto& w : rep.warnings) std::fprintf(f, "# warning: %s\n", w.c_str());
  std::fprintf(f, "lambda,resolved,a,entropy,interaction,energy\n");
  for (const auto& r : rep.rows)
    std::fprintf(f, "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", r.lambda, r.resolved ? 1 : 0, r.a,
                 r.entropy, r.interaction, r.energy);
  std::fclose(f);
}

}  // namespace dsm
