#include "dsmlab/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dsm {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}
}  // namespace

double entropy(const Field& u) {
  const auto& w = u.grid->cell_measures;
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) s += w[i] * u[i] * std::log(u[i]);
  return s;
}

double interaction(const Field& u, const Field& v) {
  const auto& w = u.grid->cell_measures;
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += w[i] * u[i] * v[i];
  return s;
}

double h1_norm_sq(const Field& v) {
  const auto& w = v.grid->cell_measures;
  const auto g = face_gradient(v);
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double grad2 = 0.5 * (g[i] * g[i] + g[i + 1] * g[i + 1]);
    s += w[i] * (grad2 + v[i] * v[i]);
  }
  return s;
}

double energy(const Field& u, const Field& v) {
  return entropy(u) + 0.5 * h1_norm_sq(v) - interaction(u, v);
}

double dissipation(const Field& u, const Field& v, const Motility& m) {
  const auto& w = u.grid->cell_measures;
  const int n = u.size();
  const double dx = u.grid->dx;
  const double floor = 1e-14 * max_abs(u);

  // face values of (d log u - d v); zero where a neighbor is (numerically) empty
  std::vector<double> q(static_cast<size_t>(n) + 1, 0.0);
  for (int f = 1; f < n; ++f) {
    const double uL = u[f - 1], uR = u[f];
    if (uL <= 0.0 || uR <= 0.0) continue;
    q[f] = (std::log(uR) - std::log(uL)) / dx - (v[f] - v[f - 1]) / dx;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (u[i] < floor) continue;
    const double q2 = 0.5 * (q[i] * q[i] + q[i + 1] * q[i + 1]);
    s += w[i] * u[i] * m.eval(v[i]).gamma * q2;
  }
  return s;
}

double exp_moment(const Field& v, double alpha) {
  const auto& w = v.grid->cell_measures;
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += w[i] * std::exp(alpha * v[i]);
  return s;
}

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto& w = u.grid->cell_measures;
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::abs(u[i]), p);
  return std::pow(s, 1.0 / p);
}

double key_identity_residual(const SimState& a, const SimState& b, const Motility& m, double mu,
                             const HelmholtzOperator& H) {
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) return kNaN;
  const int n = a.u.size();
  Field gu(a.u.grid), u2(a.u.grid);
  for (int i = 0; i < n; ++i) {
    const double g = m.eval(a.v[i]).gamma;
    gu[i] = g * a.u[i] + mu * a.u[i];
    u2[i] = a.u[i] * a.u[i];
  }
  const Field rhs = H.solve(gu);
  Field su2 = mu > 0.0 ? H.solve(u2) : Field(a.u.grid, 0.0);
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = m.eval(a.v[i]).gamma;
    const double val =
        (b.v[i] - a.v[i]) / dt + g * a.u[i] + mu * su2[i] - rhs[i];
    r = std::max(r, std::abs(val));
  }
  return r;
}

std::vector<std::string> record_columns(const DiagnosticsConfig& cfg) {
  std::vector<std::string> cols{"t",       "mass",        "mass_v",    "energy",
                                "dissipation", "entropy", "interaction", "grad_norm"};
  for (double a : cfg.exp_alphas) cols.push_back("exp_moment_" + short_num(a));
  cols.insert(cols.end(), {"u_inf", "v_inf", "v_min"});
  for (double p : cfg.lp_orders) cols.push_back("lp_" + short_num(p));
  cols.insert(cols.end(), {"identity_residual", "pte1_margin", "pte3_margin"});
  return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
  std::vector<double> v{r.t,      r.mass,        r.mass_v,  r.energy,
                        r.dissipation, r.entropy, r.interaction, r.grad_norm};
  v.insert(v.end(), r.exp_moments.begin(), r.exp_moments.end());
  v.insert(v.end(), {r.u_inf, r.v_inf, r.v_min});
  v.insert(v.end(), r.lp_norms.begin(), r.lp_norms.end());
  v.insert(v.end(), {r.identity_residual, r.pte1_margin, r.pte3_margin});
  return v;
}

TrajectoryMonitor::TrajectoryMonitor(DiagnosticsConfig cfg, Motility m, double mu,
                                     const HelmholtzOperator& H)
    : cfg_(std::move(cfg)), motility_(std::move(m)), mu_(mu), helm_(H),
      v_star_(std::numeric_limits<double>::infinity()) {}

DiagnosticsRecord TrajectoryMonitor::record(const SimState& cur, const SimState& prev,
                                            double dt) {
  if (first_) {
    v0_ = cur.v;
    first_ = false;
  }
  v_star_ = std::min(v_star_, min_value(cur.v));

  DiagnosticsRecord r;
  r.t = cur.t;
  r.mass = integrate(cur.u);
  r.mass_v = integrate(cur.v);
  r.energy = energy(cur.u, cur.v);
  r.dissipation = dissipation(cur.u, cur.v, motility_);
  r.entropy = entropy(cur.u);
  r.interaction = interaction(cur.u, cur.v);
  r.grad_norm = h1_norm_sq(cur.v);
  for (double a : cfg_.exp_alphas) r.exp_moments.push_back(exp_moment(cur.v, a));
  r.u_inf = max_abs(cur.u);
  r.v_inf = max_abs(cur.v);
  r.v_min = min_value(cur.v);
  for (double p : cfg_.lp_orders) r.lp_norms.push_back(lp_norm(cur.u, p));
  r.identity_residual =
      dt > 0.0 ? key_identity_residual(prev, cur, motility_, mu_, helm_) : kNaN;

  const double gstar = motility_.eval(std::max(v_star_, motility_.s_min())).gamma;
  const double expo = std::min((gstar + mu_) * cur.t, 700.0);  // avoid overflow; bound only grows
  const double growth = std::exp(expo);
  double m1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cur.v.size(); ++i) m1 = std::min(m1, v0_[i] * growth - cur.v[i]);
  r.pte1_margin = m1;

  if (mu_ > gstar) {
    const double cap = mu_ / (mu_ - gstar);
    double m3 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cur.v.size(); ++i) m3 = std::min(m3, v0_[i] + cap - cur.v[i]);
    r.pte3_margin = m3;
  } else {
    r.pte3_margin = kNaN;
  }

  rows_.push_back(r);
  return r;
}

TrendFit fit_trend(std::span<const double> t, std::span<const double> y, int min_samples) {
  TrendFit f;
  f.n = static_cast<int>(t.size());
  if (f.n < min_samples || t.size() != y.size()) return f;  // inconclusive, never fabricated
  double st = 0, sy = 0;
  for (int i = 0; i < f.n; ++i) {
    st += t[i];
    sy += y[i];
  }
  const double mt = st / f.n, my = sy / f.n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < f.n; ++i) {
    sxx += (t[i] - mt) * (t[i] - mt);
    sxy += (t[i] - mt) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mt;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < f.n; ++i) {
    const double e = y[i] - (f.slope * t[i] + f.intercept);
    ss_res += e * e;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  f.conclusive = true;
  f.growing = f.slope > 0.0 && f.r2 > 0.9;
  return f;
}

BlowupTrendReport blowup_trend(std::span<const DiagnosticsRecord> rows,
                               const DiagnosticsConfig& cfg, int min_samples) {
  BlowupTrendReport rep;
  if (rows.empty()) return rep;
  const double t_end = rows.back().t;
  const double t_half = t_end / 2.0;
  std::vector<double> t, ui, uv, gn;
  std::vector<std::vector<double>> em(cfg.exp_alphas.size());
  for (const auto& r : rows) {
    if (r.t < t_half) continue;
    t.push_back(r.t);
    ui.push_back(r.u_inf);
    uv.push_back(r.interaction);
    gn.push_back(r.grad_norm);
    for (size_t a = 0; a < em.size() && a < r.exp_moments.size(); ++a)
      em[a].push_back(r.exp_moments[a]);
  }
  rep.window_start = t.empty() ? t_half : t.front();
  rep.window_end = t_end;
  rep.u_inf = fit_trend(t, ui, min_samples);
  rep.interaction = fit_trend(t, uv, min_samples);
  rep.grad_norm = fit_trend(t, gn, min_samples);
  for (size_t a = 0; a < em.size(); ++a)
    rep.exp_moments.emplace_back(cfg.exp_alphas[a], fit_trend(t, em[a], min_samples));
  return rep;
}

}  // namespace dsm
