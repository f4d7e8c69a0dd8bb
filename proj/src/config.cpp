#include "dsmlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dsm {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fmt(xs[i]);
  }
  return s;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& ctx) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(ctx + ": expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& ctx) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(ctx + ": expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& ctx) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, ctx));
  return out;
}

template <typename T>
T parse_enum(const std::string& v, std::initializer_list<std::pair<const char*, T>> table,
             const std::string& ctx) {
  for (const auto& [name, val] : table)
    if (v == name) return val;
  std::string opts;
  for (const auto& [name, val] : table) {
    if (!opts.empty()) opts += "|";
    opts += name;
  }
  throw std::invalid_argument(ctx + ": expected one of " + opts + ", got '" + v + "'");
}

}  // namespace

const char* to_string(Geometry g) { return g == Geometry::Disk ? "disk" : "interval"; }

const char* to_string(MotilityKind k) {
  switch (k) {
    case MotilityKind::Exp: return "exp";
    case MotilityKind::Power: return "power";
    case MotilityKind::Gauss: return "gauss";
    case MotilityKind::DoubleExp: return "double_exp";
    case MotilityKind::PowerLog: return "power_log";
  }
  return "?";
}

const char* to_string(Stepper s) {
  return s == Stepper::SemiImplicit ? "semi_implicit" : "explicit_rk2";
}

const char* to_string(AdvectionScheme a) {
  switch (a) {
    case AdvectionScheme::Hybrid: return "hybrid";
    case AdvectionScheme::Upwind: return "upwind";
    case AdvectionScheme::Central: return "central";
  }
  return "?";
}

const char* to_string(RunConfig::Mode m) {
  switch (m) {
    case RunConfig::Mode::Run: return "run";
    case RunConfig::Mode::Construct: return "construct";
    case RunConfig::Mode::Steady: return "steady";
    case RunConfig::Mode::Asymptotics: return "asymptotics";
  }
  return "?";
}

const char* to_string(InitialSpec::Kind k) {
  switch (k) {
    case InitialSpec::Kind::Constant: return "constant";
    case InitialSpec::Kind::GaussianBump: return "gaussian_bump";
    case InitialSpec::Kind::Perturbed: return "perturbed";
    case InitialSpec::Kind::Blowup: return "blowup";
  }
  return "?";
}

void RunConfig::validate() const {
  if (grid.n_cells < 8) throw std::invalid_argument("config: grid.n_cells must be >= 8");
  if (!(grid.extent > 0)) throw std::invalid_argument("config: grid.extent must be > 0");
  if (mu < 0) throw std::invalid_argument("config: mu must be >= 0");
  if (sample_every < 0) throw std::invalid_argument("config: sample_every must be >= 0");
  if (checkpoint_every < 0) throw std::invalid_argument("config: checkpoint_every must be >= 0");
  if (mode == Mode::Run) scheme.validate();
  if (mode == Mode::Asymptotics && asym_lambdas.empty())
    throw std::invalid_argument("config: asymptotics mode needs a lambdas list");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;

  auto ctx = [&](const std::string& key) {
    return origin + ":" + std::to_string(lineno) + " [" + section + "] " + key;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (section == "run") {
      if (key == "mode")
        c.mode = parse_enum<RunConfig::Mode>(val,
                                             {{"run", RunConfig::Mode::Run},
                                              {"construct", RunConfig::Mode::Construct},
                                              {"steady", RunConfig::Mode::Steady},
                                              {"asymptotics", RunConfig::Mode::Asymptotics}},
                                             ctx(key));
      else if (key == "mu")
        c.mu = parse_double(val, ctx(key));
      else if (key == "out_dir")
        c.out_dir = val;
      else if (key == "seed")
        c.seed = static_cast<unsigned long>(parse_long(val, ctx(key)));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "grid") {
      if (key == "geometry")
        c.grid.geometry = parse_enum<Geometry>(
            val, {{"disk", Geometry::Disk}, {"interval", Geometry::Interval}}, ctx(key));
      else if (key == "extent")
        c.grid.extent = parse_double(val, ctx(key));
      else if (key == "n_cells")
        c.grid.n_cells = static_cast<int>(parse_long(val, ctx(key)));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "motility") {
      if (key == "kind")
        c.motility.kind = parse_enum<MotilityKind>(val,
                                                   {{"exp", MotilityKind::Exp},
                                                    {"power", MotilityKind::Power},
                                                    {"gauss", MotilityKind::Gauss},
                                                    {"double_exp", MotilityKind::DoubleExp},
                                                    {"power_log", MotilityKind::PowerLog}},
                                                   ctx(key));
      else if (key == "c0")
        c.motility.c0 = parse_double(val, ctx(key));
      else if (key == "k")
        c.motility.k = parse_double(val, ctx(key));
      else if (key == "s_min")
        c.motility.s_min = parse_double(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "initial") {
      if (key == "kind")
        c.initial.kind = parse_enum<InitialSpec::Kind>(
            val,
            {{"constant", InitialSpec::Kind::Constant},
             {"gaussian_bump", InitialSpec::Kind::GaussianBump},
             {"perturbed", InitialSpec::Kind::Perturbed},
             {"blowup", InitialSpec::Kind::Blowup}},
            ctx(key));
      else if (key == "c")
        c.initial.profile.c = parse_double(val, ctx(key));
      else if (key == "amp")
        c.initial.profile.amp = parse_double(val, ctx(key));
      else if (key == "width")
        c.initial.profile.width = parse_double(val, ctx(key));
      else if (key == "eps")
        c.initial.profile.eps = parse_double(val, ctx(key));
      else if (key == "mass_target")
        c.initial.profile.mass_target = parse_double(val, ctx(key));
      else if (key == "Lambda")
        c.initial.recipe.Lambda = parse_double(val, ctx(key));
      else if (key == "lambda")
        c.initial.recipe.lambda = parse_double(val, ctx(key));
      else if (key == "r")
        c.initial.recipe.r = parse_double(val, ctx(key));
      else if (key == "r1")
        c.initial.recipe.r1 = parse_double(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "scheme") {
      if (key == "stepper")
        c.scheme.stepper = parse_enum<Stepper>(
            val, {{"semi_implicit", Stepper::SemiImplicit}, {"explicit_rk2", Stepper::ExplicitRK2}},
            ctx(key));
      else if (key == "advection")
        c.scheme.advection = parse_enum<AdvectionScheme>(val,
                                                         {{"hybrid", AdvectionScheme::Hybrid},
                                                          {"upwind", AdvectionScheme::Upwind},
                                                          {"central", AdvectionScheme::Central}},
                                                         ctx(key));
      else if (key == "dt_init")
        c.scheme.dt_init = parse_double(val, ctx(key));
      else if (key == "dt_min")
        c.scheme.dt_min = parse_double(val, ctx(key));
      else if (key == "dt_max")
        c.scheme.dt_max = parse_double(val, ctx(key));
      else if (key == "cfl_safety")
        c.scheme.cfl_safety = parse_double(val, ctx(key));
      else if (key == "t_end")
        c.scheme.t_end = parse_double(val, ctx(key));
      else if (key == "overflow_cap")
        c.scheme.overflow_cap = parse_double(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "diagnostics") {
      if (key == "sample_every")
        c.sample_every = parse_long(val, ctx(key));
      else if (key == "alphas")
        c.diagnostics.exp_alphas = parse_list(val, ctx(key));
      else if (key == "lp")
        c.diagnostics.lp_orders = parse_list(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "output") {
      if (key == "snapshots")
        c.snapshot_times = parse_list(val, ctx(key));
      else if (key == "checkpoint_every")
        c.checkpoint_every = parse_long(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "steady") {
      if (key == "lambda_start")
        c.lambda_start = parse_double(val, ctx(key));
      else if (key == "lambda_end")
        c.lambda_end = parse_double(val, ctx(key));
      else if (key == "steps")
        c.lambda_steps = static_cast<int>(parse_long(val, ctx(key)));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else if (section == "asymptotics") {
      if (key == "Lambda")
        c.asym_Lambda = parse_double(val, ctx(key));
      else if (key == "lambdas")
        c.asym_lambdas = parse_list(val, ctx(key));
      else if (key == "delta")
        c.asym_delta = parse_double(val, ctx(key));
      else
        throw std::invalid_argument(ctx(key) + ": unknown key");
    } else {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::invalid_argument("config: cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), p.string());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[run]\n";
  o << "mode = " << to_string(c.mode) << "\n";
  o << "mu = " << fmt(c.mu) << "\n";
  o << "out_dir = " << c.out_dir << "\n";
  o << "seed = " << c.seed << "\n";
  o << "[grid]\n";
  o << "geometry = " << to_string(c.grid.geometry) << "\n";
  o << "extent = " << fmt(c.grid.extent) << "\n";
  o << "n_cells = " << c.grid.n_cells << "\n";
  o << "[motility]\n";
  o << "kind = " << to_string(c.motility.kind) << "\n";
  o << "c0 = " << fmt(c.motility.c0) << "\n";
  o << "k = " << fmt(c.motility.k) << "\n";
  o << "s_min = " << fmt(c.motility.s_min) << "\n";
  o << "[initial]\n";
  o << "kind = " << to_string(c.initial.kind) << "\n";
  o << "c = " << fmt(c.initial.profile.c) << "\n";
  o << "amp = " << fmt(c.initial.profile.amp) << "\n";
  o << "width = " << fmt(c.initial.profile.width) << "\n";
  o << "eps = " << fmt(c.initial.profile.eps) << "\n";
  o << "mass_target = " << fmt(c.initial.profile.mass_target) << "\n";
  o << "Lambda = " << fmt(c.initial.recipe.Lambda) << "\n";
  o << "lambda = " << fmt(c.initial.recipe.lambda) << "\n";
  o << "r = " << fmt(c.initial.recipe.r) << "\n";
  o << "r1 = " << fmt(c.initial.recipe.r1) << "\n";
  o << "[scheme]\n";
  o << "stepper = " << to_string(c.scheme.stepper) << "\n";
  o << "advection = " << to_string(c.scheme.advection) << "\n";
  o << "dt_init = " << fmt(c.scheme.dt_init) << "\n";
  o << "dt_min = " << fmt(c.scheme.dt_min) << "\n";
  o << "dt_max = " << fmt(c.scheme.dt_max) << "\n";
  o << "cfl_safety = " << fmt(c.scheme.cfl_safety) << "\n";
  o << "t_end = " << fmt(c.scheme.t_end) << "\n";
  o << "overflow_cap = " << fmt(c.scheme.overflow_cap) << "\n";
  o << "[diagnostics]\n";
  o << "sample_every = " << c.sample_every << "\n";
  o << "alphas = " << fmt_list(c.diagnostics.exp_alphas) << "\n";
  o << "lp = " << fmt_list(c.diagnostics.lp_orders) << "\n";
  o << "[output]\n";
  o << "snapshots = " << fmt_list(c.snapshot_times) << "\n";
  o << "checkpoint_every = " << c.checkpoint_every << "\n";
  o << "[steady]\n";
  o << "lambda_start = " << fmt(c.lambda_start) << "\n";
  o << "lambda_end = " << fmt(c.lambda_end) << "\n";
  o << "steps = " << c.lambda_steps << "\n";
  o << "[asymptotics]\n";
  o << "Lambda = " << fmt(c.asym_Lambda) << "\n";
  o << "lambdas = " << fmt_list(c.asym_lambdas) << "\n";
  o << "delta = " << fmt(c.asym_delta) << "\n";
  return o.str();
}

std::string config_hash(const RunConfig& c) {
  const std::string s = serialize_config(c);
  uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dsm
