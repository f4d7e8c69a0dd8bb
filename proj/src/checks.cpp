#include "dsmlab/checks.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dsmlab/diagnostics.hpp"

namespace dsm {

double CheckLine::num(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  return std::stod(it->second);
}

std::string CheckLine::str(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<CheckLine> parse_checks(const std::string& text) {
  std::vector<CheckLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    CheckLine c;
    if (!(ls >> c.name)) continue;
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("check spec: expected key=value, got '" + tok + "'");
      c.params[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::string fmt_detail(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CheckResult one(const SeriesTable& s, const std::string& sname, const CheckLine& c) {
  CheckResult r;
  r.series = sname;
  r.name = c.name;

  const auto t = s.column("t");
  if (t.empty()) {
    r.detail = "empty series";
    return r;
  }

  if (c.name == "mass_drift") {
    const double tol = c.num("max_rel", 1e-10);
    const auto mass = s.column("mass");
    double drift = 0.0;
    for (double m : mass) drift = std::max(drift, std::abs(m - mass[0]));
    drift /= std::abs(mass[0]);
    r.pass = drift < tol;
    r.detail = fmt_detail("drift=%.3e (max %.1e)", drift, tol);
  } else if (c.name == "mass_cap") {
    const double tol = c.num("tol", 1e-6);
    const double omega = s.metadata_num("domain_measure", 0.0);
    const auto mass = s.column("mass");
    const double cap = std::max(mass[0], omega) * (1.0 + tol);
    double worst = -1e300;
    for (double m : mass) worst = std::max(worst, m);
    r.pass = worst <= cap;
    r.detail = fmt_detail("max mass=%.12g (cap %.12g)", worst, cap);
  } else if (c.name == "energy_pv") {
    const double tol = c.num("max_rel", 1e-3);
    const auto e = s.column("energy");
    double pv = 0.0;
    for (size_t i = 1; i < e.size(); ++i) pv += std::max(e[i] - e[i - 1], 0.0);
    const double rel = pv / std::abs(e[0]);
    r.pass = rel < tol;
    r.detail = fmt_detail("pv_rel=%.3e (max %.1e)", rel, tol);
  } else if (c.name == "pte1_margin") {
    const double tol = c.num("tol", 1e-6);
    const double t_max = c.num("t_max", std::numeric_limits<double>::infinity());
    const auto m = s.column("pte1_margin");
    const auto vi = s.column("v_inf");
    double worst = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
      if (t[i] > t_max) continue;
      worst = std::min(worst, m[i]);
      vmax = std::max(vmax, vi[i]);
    }
    r.pass = worst >= -tol * vmax;
    r.detail = fmt_detail("min margin=%.3e (floor %.3e)", worst, -tol * vmax);
  } else if (c.name == "pte3_margin") {
    const double tol = c.num("tol", 1e-6);
    const auto m = s.column("pte3_margin");
    double worst = std::numeric_limits<double>::infinity();
    bool any = false;
    for (double x : m) {
      if (std::isnan(x)) continue;
      any = true;
      worst = std::min(worst, x);
    }
    r.pass = any && worst >= -tol;
    r.detail = any ? fmt_detail("min margin=%.3e (floor %.1e)", worst, -tol)
                   : "bound never applicable (mu <= gamma(v_star))";
  } else if (c.name == "uv_identity") {
    const double tol = c.num("tol", 1e-9);
    const auto uv = s.column("interaction");
    const auto gn = s.column("grad_norm");
    double worst = 0.0;
    for (size_t i = 0; i < uv.size(); ++i)
      worst = std::max(worst, std::abs(uv[i] - gn[i]) / std::max(1.0, std::abs(uv[i])));
    r.pass = worst <= tol;
    r.detail = fmt_detail("max rel gap=%.3e (tol %.1e)", worst, tol);
  } else if (c.name == "mass_v") {
    const double tol = c.num("tol", 1e-10);
    const auto mu_ = s.column("mass");
    const auto mv = s.column("mass_v");
    double worst = 0.0;
    for (size_t i = 0; i < mu_.size(); ++i)
      worst = std::max(worst, std::abs(mu_[i] - mv[i]) / std::max(1.0, std::abs(mu_[i])));
    r.pass = worst <= tol;
    r.detail = fmt_detail("max rel gap=%.3e (tol %.1e)", worst, tol);
  } else if (c.name == "trend") {
    const std::string col = c.str("indicator", "interaction");
    const std::string expect = c.str("expect", "growing");
    const double r2min = c.num("r2", 0.9);
    const int min_samples = static_cast<int>(c.num("min_samples", 20));
    const auto y = s.column(col);
    const double t_half = t.back() / 2.0;
    std::vector<double> tw, yw;
    for (size_t i = 0; i < t.size(); ++i)
      if (t[i] >= t_half) {
        tw.push_back(t[i]);
        yw.push_back(y[i]);
      }
    TrendFit f = fit_trend(tw, yw, min_samples);
    const bool growing = f.conclusive && f.slope > 0.0 && f.r2 > r2min;
    if (!f.conclusive) {
      r.pass = false;
      r.detail = "inconclusive (too few samples)";
    } else {
      r.pass = (expect == "growing") ? growing : !growing;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: slope=%.3e r2=%.4f -> %s", col.c_str(), f.slope, f.r2,
                    growing ? "growing" : "not-growing");
      r.detail = buf;
    }
  } else if (c.name == "est0_envelope") {
    const double factor = c.num("factor", 1.1);
    const auto gn = s.column("grad_norm");
    const double t_half = t.back() / 2.0;
    double first = 0.0, second = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
      const double e = gn[i] / (1.0 + t[i]);
      if (t[i] < t_half)
        first = std::max(first, e);
      else
        second = std::max(second, e);
    }
    r.pass = second <= factor * first + 1e-12;
    r.detail = fmt_detail("2nd-half max=%.6g (cap %.6g)", second, factor * first);
  } else if (c.name == "identity_residual") {
    const double cap = c.num("max", 1e-3);
    const auto res = s.column("identity_residual");
    double worst = 0.0;
    for (double x : res)
      if (!std::isnan(x)) worst = std::max(worst, x);
    r.pass = worst <= cap;
    r.detail = fmt_detail("max residual=%.3e (cap %.1e)", worst, cap);
  } else if (c.name == "bounded") {
    const double cap = c.num("max", std::numeric_limits<double>::infinity());
    const auto y = s.column(c.str("column", "u_inf"));
    double worst = 0.0;
    for (double x : y) worst = std::max(worst, std::abs(x));
    r.pass = worst <= cap;
    r.detail = fmt_detail("sup=%.6g (cap %.6g)", worst, cap);
  } else {
    throw std::invalid_argument("unknown check '" + c.name + "'");
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const SeriesTable& series, const std::string& series_name,
                                    const std::vector<CheckLine>& checks) {
  std::vector<CheckResult> out;
  out.reserve(checks.size());
  for (const auto& c : checks) out.push_back(one(series, series_name, c));
  return out;
}

int print_check_report(const std::vector<CheckResult>& results, FILE* out) {
  int failures = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    std::fprintf(out, "%-4s  %-18s  %-24s  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                 r.series.c_str(), r.detail.c_str());
  }
  return failures;
}

}  // namespace dsm
