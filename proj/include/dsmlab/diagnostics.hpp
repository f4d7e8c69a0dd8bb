#pragma once

#include <span>
#include <string>
#include <vector>

#include "dsmlab/dynamics.hpp"

namespace dsm {

// ---- pointwise functionals -------------------------------------------------

/// integral of u log u with the 0 log 0 := 0 convention
double entropy(const Field& u);
/// integral of u v
double interaction(const Field& u, const Field& v);
/// integral of |grad v|^2 + v^2; face gradients squared and averaged to cells,
/// which makes the discrete identity  interaction(u, solve(u)) == h1_norm_sq(v)
/// hold to roundoff.
double h1_norm_sq(const Field& v);
/// E = entropy + 1/2 h1_norm_sq - interaction
double energy(const Field& u, const Field& v);
/// integral of u gamma(v) |grad log u - grad v|^2; cells below
/// 1e-14 * max(u) contribute zero. Nonnegative.
double dissipation(const Field& u, const Field& v, const Motility& m);
double exp_moment(const Field& v, double alpha);
double lp_norm(const Field& u, double p);

/// sup norm of  (v_b - v_a)/dt + gamma(v)u + mu (I-Lap)^{-1}[u^2]
///              - (I-Lap)^{-1}[gamma(v)u + mu u]
/// with the algebraic terms taken at the earlier state. NaN when dt <= 0.
double key_identity_residual(const SimState& a, const SimState& b, const Motility& m, double mu,
                             const HelmholtzOperator& H);

// ---- per-sample record -----------------------------------------------------

struct DiagnosticsConfig {
  std::vector<double> exp_alphas{0.6, 1.0};
  std::vector<double> lp_orders{2.0, 3.0};
};

struct DiagnosticsRecord {
  double t = 0;
  double mass = 0, mass_v = 0;
  double energy = 0, dissipation = 0, entropy = 0, interaction = 0, grad_norm = 0;
  std::vector<double> exp_moments;
  double u_inf = 0, v_inf = 0, v_min = 0;
  std::vector<double> lp_norms;
  double identity_residual = 0;  // NaN when no step pair is available
  double pte1_margin = 0;
  double pte3_margin = 0;  // NaN unless mu > gamma(v_star)
};

std::vector<std::string> record_columns(const DiagnosticsConfig& cfg);
std::vector<double> record_values(const DiagnosticsRecord& r);

/// Stateful sink for one run: captures v0 on the first sample, tracks the
/// running minimum v_star (the measured stand-in for the paper-level lower
/// bound) and evaluates the pointwise-bound margins against it.
class TrajectoryMonitor {
 public:
  TrajectoryMonitor(DiagnosticsConfig cfg, Motility m, double mu, const HelmholtzOperator& H);

  DiagnosticsRecord record(const SimState& cur, const SimState& prev, double dt);
  const std::vector<DiagnosticsRecord>& rows() const { return rows_; }
  double v_star() const { return v_star_; }

 private:
  DiagnosticsConfig cfg_;
  Motility motility_;
  double mu_;
  const HelmholtzOperator& helm_;
  Field v0_;
  bool first_ = true;
  double v_star_ = 0;
  std::vector<DiagnosticsRecord> rows_;
};

// ---- trend fits ------------------------------------------------------------

struct TrendFit {
  double slope = 0, intercept = 0, r2 = 0;
  int n = 0;
  bool conclusive = false;  // enough samples
  bool growing = false;     // conclusive && slope > 0 && r2 > 0.9
};

/// Ordinary least squares y ~ a t + b with R^2. Inconclusive (never "growing")
/// below min_samples.
TrendFit fit_trend(std::span<const double> t, std::span<const double> y, int min_samples = 20);

struct BlowupTrendReport {
  double window_start = 0, window_end = 0;
  TrendFit u_inf, interaction, grad_norm;
  std::vector<std::pair<double, TrendFit>> exp_moments;  // (alpha, fit)
};

/// Fits the blowup indicators on the second half of the sampled trajectory.
BlowupTrendReport blowup_trend(std::span<const DiagnosticsRecord> rows,
                               const DiagnosticsConfig& cfg, int min_samples = 20);

}  // namespace dsm
