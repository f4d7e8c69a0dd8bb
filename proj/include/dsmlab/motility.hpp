#pragma once

#include <span>
#include <string>

namespace dsm {

enum class MotilityKind { Exp, Power, Gauss, DoubleExp, PowerLog };

struct MotilityEval {
  double gamma;
  double dgamma;
  double d2gamma;
};

/// Decreasing motility gamma(v) with first and second derivatives.
///
/// Kinds: Exp e^{-s}; Power c0 s^{-k}; Gauss e^{-s^2}; DoubleExp e^{-e^s};
/// PowerLog 1/(s^k log(1+s)). Power and PowerLog are singular at s = 0 and
/// carry a lower cutoff s_min (default 1e-8) below which eval() throws.
class Motility {
 public:
  static Motility exponential();
  static Motility power(double c0, double k);
  static Motility gauss();
  static Motility double_exp();
  static Motility power_log(double k);
  static Motility make(MotilityKind kind, double c0 = 1.0, double k = 1.0,
                       double s_min_override = -1.0);

  MotilityKind kind() const { return kind_; }
  double c0() const { return c0_; }
  double k() const { return k_; }
  bool singular_at_zero() const;
  double s_min() const { return s_min_; }

  /// Throws std::domain_error below s_min for singular kinds.
  MotilityEval eval(double s) const;
  double gamma(double s) const { return eval(s).gamma; }

  std::string name() const;

 private:
  Motility(MotilityKind kind, double c0, double k, double s_min);
  MotilityKind kind_;
  double c0_, k_, s_min_;
};

/// sup over s of |gamma'(s)|^2 / gamma(s), over a dense sample of
/// [s_min, s_max] combined with the analytic endpoint limits (s -> 0+ and
/// s -> infinity). Returns +infinity when the ratio diverges (singular kinds).
/// Requires n_samples >= 1000.
double compute_K0(const Motility& m, double s_max, int n_samples);

/// Heuristic numeric witness that s^k_witness * gamma(s) increases without
/// bound along `probes` (ascending, last >= 1e6): strict monotone growth plus
/// a 10x overall gain.
bool check_A2(const Motility& m, double k_witness, std::span<const double> probes);

}  // namespace dsm
