#include "dsmlab/steady.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsmlab/diagnostics.hpp"
#include "dsmlab/tridiag.hpp"

namespace dsm {

namespace {

// e^{v - max v} and the shifted weight sum S' = sum w e^{v-m};
// e^v / S == e^{v-m} / S' for any shift.
void shifted_exp(const Field& v, std::vector<double>& ev, double& sum_w_ev) {
  const auto& w = v.grid->cell_measures;
  const double m = max_value(v);
  sum_w_ev = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    ev[i] = std::exp(v[i] - m);
    sum_w_ev += w[i] * ev[i];
  }
}

// F(v) = A v - Lambda e^v / S
void residual(const HelmholtzOperator& H, double Lambda, const Field& v, std::vector<double>& ev,
              std::vector<double>& F) {
  double S = 0.0;
  shifted_exp(v, ev, S);
  H.apply_into(v.values, F);
  for (size_t i = 0; i < F.size(); ++i) F[i] -= Lambda * ev[i] / S;
}

double sup_norm(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

SteadyEntry newton_steady(double Lambda, const HelmholtzOperator& H, const Field& guess,
                          const SteadyOptions& opts) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("newton_steady: Lambda must be > 0");
  if (!all_finite(guess)) throw std::invalid_argument("newton_steady: guess not finite");

  const GridPtr grid = H.grid_ptr();
  const int n = grid->n_cells;
  const auto& w = grid->cell_measures;

  SteadyEntry out;
  out.Lambda = Lambda;
  out.v = guess;

  std::vector<double> ev(n), F(n), Fn(n), d(n), t1(n), t2(n);
  std::vector<double> lo(n - 1), di(n), up(n - 1), rho(n), sig(n);

  residual(H, Lambda, out.v, ev, F);
  double fnorm = sup_norm(F);

  for (out.iterations = 0; out.iterations < opts.max_iter; ++out.iterations) {
    if (fnorm < opts.tol) {
      out.converged = true;
      break;
    }
    // J = T + rho sigma^T:  T = A - (Lambda/S) diag(e^v),
    // rho = (Lambda/S^2) e^v, sigma = w .* e^v   (shift-invariant pieces)
    double S = 0.0;
    shifted_exp(out.v, ev, S);
    std::copy(H.diag().begin(), H.diag().end(), di.begin());
    std::copy(H.lower().begin(), H.lower().end(), lo.begin());
    std::copy(H.upper().begin(), H.upper().end(), up.begin());
    for (int i = 0; i < n; ++i) {
      di[i] -= Lambda * ev[i] / S;
      rho[i] = Lambda * ev[i] / (S * S);
      sig[i] = w[i] * ev[i];
    }
    // Sherman-Morrison: J d = -F
    for (int i = 0; i < n; ++i) Fn[i] = -F[i];
    if (!solve_tridiag_pivot(lo, di, up, Fn, t1) || !solve_tridiag_pivot(lo, di, up, rho, t2))
      break;  // singular tridiagonal part: give up, flag stays false
    double num = 0.0, den = 1.0;
    for (int i = 0; i < n; ++i) {
      num += sig[i] * t1[i];
      den += sig[i] * t2[i];
    }
    if (den == 0.0 || !std::isfinite(den)) break;
    for (int i = 0; i < n; ++i) d[i] = t1[i] - t2[i] * num / den;

    // damped acceptance (halving line search on the sup norm)
    double alpha = 1.0;
    Field vtrial = out.v;
    double new_norm = std::numeric_limits<double>::infinity();
    for (int ls = 0; ls < 30; ++ls) {
      for (int i = 0; i < n; ++i) vtrial[i] = out.v[i] + alpha * d[i];
      residual(H, Lambda, vtrial, ev, Fn);
      new_norm = sup_norm(Fn);
      if (std::isfinite(new_norm) && new_norm < fnorm * (1.0 - 1e-4 * alpha)) break;
      alpha *= 0.5;
      if (alpha < 1e-8) break;
    }
    if (!std::isfinite(new_norm) || new_norm >= fnorm) break;  // stagnated
    out.v = vtrial;
    std::copy(Fn.begin(), Fn.end(), F.begin());
    fnorm = new_norm;
  }
  if (!out.converged && fnorm < opts.tol) out.converged = true;

  out.residual = fnorm;
  out.v_max = max_value(out.v);

  out.u = Field(grid);
  double S = 0.0;
  shifted_exp(out.v, ev, S);
  for (int i = 0; i < n; ++i) out.u[i] = Lambda * ev[i] / S;
  const double mass = integrate(out.u);
  if (mass > 0.0)
    for (double& x : out.u.values) x *= Lambda / mass;
  out.energy = energy(out.u, out.v);
  return out;
}

double SteadyBranch::best_energy() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : entries)
    if (e.converged) best = std::min(best, e.energy);
  return best;
}

SteadyBranch continuation_sweep(double Lambda_start, double Lambda_end, int steps, GridPtr grid,
                                const SteadyOptions& opts) {
  if (!(Lambda_start > 0.0) || !(Lambda_end > 0.0))
    throw std::invalid_argument("continuation_sweep: Lambda range must be positive");
  if (steps < 1) throw std::invalid_argument("continuation_sweep: steps must be >= 1");

  HelmholtzOperator H(grid);
  SteadyBranch branch;
  Field guess(grid, Lambda_start / grid->domain_measure());
  for (int j = 0; j <= steps; ++j) {
    const double L =
        Lambda_start + (Lambda_end - Lambda_start) * static_cast<double>(j) / steps;
    SteadyEntry e = newton_steady(L, H, guess, opts);
    if (e.converged) guess = e.v;  // warm start; gaps keep the previous warm start
    branch.entries.push_back(std::move(e));
  }
  return branch;
}

}  // namespace dsm
