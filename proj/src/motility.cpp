#include "dsmlab/motility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsm {

namespace {
constexpr double kDefaultSingularCutoff = 1e-8;
}

Motility::Motility(MotilityKind kind, double c0, double k, double s_min)
    : kind_(kind), c0_(c0), k_(k), s_min_(s_min) {}

Motility Motility::exponential() { return Motility(MotilityKind::Exp, 1.0, 1.0, 0.0); }
Motility Motility::gauss() { return Motility(MotilityKind::Gauss, 1.0, 1.0, 0.0); }
Motility Motility::double_exp() { return Motility(MotilityKind::DoubleExp, 1.0, 1.0, 0.0); }

Motility Motility::power(double c0, double k) {
  if (!(c0 > 0.0) || !(k > 0.0)) throw std::invalid_argument("Motility::power: need c0, k > 0");
  return Motility(MotilityKind::Power, c0, k, kDefaultSingularCutoff);
}

Motility Motility::power_log(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("Motility::power_log: need k > 0");
  return Motility(MotilityKind::PowerLog, 1.0, k, kDefaultSingularCutoff);
}

Motility Motility::make(MotilityKind kind, double c0, double k, double s_min_override) {
  Motility m = [&] {
    switch (kind) {
      case MotilityKind::Exp: return exponential();
      case MotilityKind::Power: return power(c0, k);
      case MotilityKind::Gauss: return gauss();
      case MotilityKind::DoubleExp: return double_exp();
      case MotilityKind::PowerLog: return power_log(k);
    }
    throw std::invalid_argument("Motility::make: unknown kind");
  }();
  if (s_min_override >= 0.0) m.s_min_ = s_min_override;
  return m;
}

bool Motility::singular_at_zero() const {
  return kind_ == MotilityKind::Power || kind_ == MotilityKind::PowerLog;
}

std::string Motility::name() const {
  switch (kind_) {
    case MotilityKind::Exp: return "exp";
    case MotilityKind::Power: return "power";
    case MotilityKind::Gauss: return "gauss";
    case MotilityKind::DoubleExp: return "double_exp";
    case MotilityKind::PowerLog: return "power_log";
  }
  return "?";
}

MotilityEval Motility::eval(double s) const {
  if (!(s >= s_min_)) {
    if (singular_at_zero())
      throw std::domain_error("Motility::eval: s below singular cutoff s_min");
    if (!(s >= 0.0)) throw std::domain_error("Motility::eval: s must be >= 0");
  }
  switch (kind_) {
    case MotilityKind::Exp: {
      const double g = std::exp(-s);
      return {g, -g, g};
    }
    case MotilityKind::Power: {
      const double g = c0_ * std::pow(s, -k_);
      return {g, -k_ * g / s, k_ * (k_ + 1.0) * g / (s * s)};
    }
    case MotilityKind::Gauss: {
      const double g = std::exp(-s * s);
      return {g, -2.0 * s * g, (4.0 * s * s - 2.0) * g};
    }
    case MotilityKind::DoubleExp: {
      const double es = std::exp(s);
      const double g = std::exp(-es);
      return {g, -es * g, (es * es - es) * g};
    }
    case MotilityKind::PowerLog: {
      // gamma = 1/h with h = s^k log(1+s)
      const double lg = std::log1p(s);
      const double sk = std::pow(s, k_);
      const double h = sk * lg;
      const double h1 = k_ * sk / s * lg + sk / (1.0 + s);
      const double h2 = k_ * (k_ - 1.0) * sk / (s * s) * lg + 2.0 * k_ * sk / (s * (1.0 + s)) -
                        sk / ((1.0 + s) * (1.0 + s));
      const double g = 1.0 / h;
      return {g, -h1 / (h * h), (2.0 * h1 * h1 - h * h2) / (h * h * h)};
    }
  }
  throw std::logic_error("Motility::eval: unreachable");
}

namespace {

// |gamma'|^2 / gamma at s, by kind, in closed form where cheap.
double ratio_at(const Motility& m, double s) {
  const MotilityEval e = m.eval(s);
  if (e.gamma <= 0.0) return 0.0;
  return e.dgamma * e.dgamma / e.gamma;
}

// Analytic limit of the ratio as s -> 0+.
double ratio_limit_zero(const Motility& m) {
  switch (m.kind()) {
    case MotilityKind::Exp: return 1.0;
    case MotilityKind::Gauss: return 0.0;
    case MotilityKind::DoubleExp: return std::exp(-1.0);  // e^{2s - e^s} at s=0
    case MotilityKind::Power:
    case MotilityKind::PowerLog:
      return std::numeric_limits<double>::infinity();  // ~ s^{-k-2}
  }
  return 0.0;
}

}  // namespace

double compute_K0(const Motility& m, double s_max, int n_samples) {
  if (n_samples < 1000) throw std::invalid_argument("compute_K0: n_samples must be >= 1000");
  if (!(s_max > m.s_min())) throw std::invalid_argument("compute_K0: s_max must exceed s_min");

  double k0 = ratio_limit_zero(m);
  if (std::isinf(k0)) return k0;
  // ratio -> 0 as s -> infinity for every supported kind, so the finite
  // sample plus the s -> 0 limit is a true sup.
  const double lo = m.s_min();
  for (int i = 0; i <= n_samples; ++i) {
    const double s = lo + (s_max - lo) * static_cast<double>(i) / n_samples;
    if (s <= 0.0) continue;
    k0 = std::max(k0, ratio_at(m, s));
  }
  return k0;
}

bool check_A2(const Motility& m, double k_witness, std::span<const double> probes) {
  if (probes.size() < 2) throw std::invalid_argument("check_A2: need at least 2 probes");
  for (size_t i = 1; i < probes.size(); ++i)
    if (!(probes[i] > probes[i - 1]))
      throw std::invalid_argument("check_A2: probes must be strictly increasing");
  if (!(probes.back() >= 1e6))
    throw std::invalid_argument("check_A2: last probe must reach 1e6");

  double prev = -std::numeric_limits<double>::infinity();
  double first = 0.0;
  for (size_t i = 0; i < probes.size(); ++i) {
    const double s = probes[i];
    const double g = std::pow(s, k_witness) * m.eval(s).gamma;
    if (!std::isfinite(g)) return false;
    if (i == 0)
      first = g;
    else if (!(g > prev))
      return false;
    prev = g;
  }
  return prev >= 10.0 * first;  // grew by an order of magnitude: "without bound" witness
}

}  // namespace dsm
