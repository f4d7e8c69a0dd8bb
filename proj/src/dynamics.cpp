#include "dsmlab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace dsm {

void SchemeConfig::validate() const {
  if (!(dt_min < dt_init && dt_init <= dt_max))
    throw std::invalid_argument("SchemeConfig: need dt_min < dt_init <= dt_max");
  if (!(cfl_safety > 0.0 && cfl_safety <= 0.9))
    throw std::invalid_argument("SchemeConfig: cfl_safety must be in (0, 0.9]");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SchemeConfig: t_end must be >= 0");
  if (!(overflow_cap > 0.0)) throw std::invalid_argument("SchemeConfig: overflow_cap must be > 0");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "running";
    case RunStatus::Finished: return "finished";
    case RunStatus::Overflow: return "overflow";
    case RunStatus::DtCollapse: return "dt_collapse";
  }
  return "?";
}

namespace {

// Per-face linearization F_f = cl * u_L + cr * u_R shared by the flux
// assembly and the implicit matrix, so both see the same scheme.
struct FaceCoeffs {
  double cl, cr;
};

inline FaceCoeffs face_coeffs(double gam_f, double dgam_f, double dv_f, double dx,
                              AdvectionScheme scheme) {
  const double a = dgam_f * dv_f;  // advective coefficient multiplying u_face
  bool central;
  switch (scheme) {
    case AdvectionScheme::Central: central = true; break;
    case AdvectionScheme::Upwind: central = false; break;
    case AdvectionScheme::Hybrid:
    default:
      // |a| dx / gamma_f <= 2 keeps the off-diagonals nonnegative (M-matrix)
      central = std::abs(a) * dx <= 2.0 * gam_f;
      break;
  }
  FaceCoeffs c{-gam_f / dx, gam_f / dx};
  if (central) {
    c.cl += 0.5 * a;
    c.cr += 0.5 * a;
  } else if (a <= 0.0) {
    c.cl += a;  // donor cell is the left one
  } else {
    c.cr += a;
  }
  return c;
}

}  // namespace

std::vector<double> assemble_flux(const Field& u, const Field& v, const Motility& m,
                                  AdvectionScheme scheme) {
  const RadialGrid& g = *u.grid;
  const int n = g.n_cells;
  std::vector<double> flux(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> gam(n), dgam(n);
  for (int i = 0; i < n; ++i) {
    const MotilityEval e = m.eval(v[i]);
    gam[i] = e.gamma;
    dgam[i] = e.dgamma;
  }
  const double inv_dx = 1.0 / g.dx;
  for (int f = 1; f < n; ++f) {
    const int L = f - 1, R = f;
    const double gf = 0.5 * (gam[L] + gam[R]);
    const double dgf = 0.5 * (dgam[L] + dgam[R]);
    const double dvf = (v[R] - v[L]) * inv_dx;
    const FaceCoeffs c = face_coeffs(gf, dgf, dvf, g.dx, scheme);
    flux[f] = c.cl * u[L] + c.cr * u[R];
  }
  return flux;
}

Simulation::Simulation(GridPtr grid, Motility m, double mu, SchemeConfig cfg)
    : grid_(std::move(grid)), motility_(std::move(m)), mu_(mu), cfg_(cfg), helmholtz_(grid_) {
  cfg_.validate();
  if (mu_ < 0.0) throw std::invalid_argument("Simulation: mu must be >= 0");
  const size_t n = static_cast<size_t>(grid_->n_cells);
  gam_.resize(n);
  dgam_.resize(n);
  lo_.resize(n - 1);
  di_.resize(n);
  up_.resize(n - 1);
  work_.resize(n);
  work2_.resize(n);
  work3_.resize(n);
}

void Simulation::reset(const Field& u0) {
  if (u0.grid.get() != grid_.get())
    throw std::invalid_argument("Simulation::reset: u0 lives on a different grid");
  if (!all_finite(u0)) throw std::invalid_argument("Simulation::reset: u0 not finite");
  if (min_value(u0) < 0.0) throw std::invalid_argument("Simulation::reset: u0 must be >= 0");
  if (max_abs(u0) == 0.0)
    throw std::invalid_argument("Simulation::reset: u0 must not vanish identically");
  state_.u = u0;
  state_.v = helmholtz_.solve(u0);
  state_.t = 0.0;
  state_.step = 0;
  state_.dt_last = 0.0;
  state_.status = RunStatus::Running;
}

void Simulation::restore(std::span<const double> u, double t, long step) {
  if (u.size() != static_cast<size_t>(grid_->n_cells))
    throw std::invalid_argument("Simulation::restore: size mismatch");
  state_.u.grid = grid_;
  state_.u.values.assign(u.begin(), u.end());
  state_.v = helmholtz_.solve(state_.u);
  state_.t = t;
  state_.step = step;
  state_.dt_last = 0.0;
  state_.status = RunStatus::Running;
}

double Simulation::schedule_dt() const {
  double dt = cfg_.dt_init;
  if (cfg_.stepper == Stepper::ExplicitRK2) {
    double gmax = 0.0;
    for (int i = 0; i < grid_->n_cells; ++i)
      gmax = std::max(gmax, motility_.eval(state_.v[i]).gamma);
    if (gmax > 0.0) dt = cfg_.cfl_safety * grid_->dx * grid_->dx / (2.0 * gmax);
  }
  return std::min(dt, cfg_.dt_max);
}

RunStatus Simulation::advance() {
  if (state_.status != RunStatus::Running) return state_.status;

  const double remaining = cfg_.t_end - state_.t;
  if (remaining <= 0.0) {
    state_.status = RunStatus::Finished;
    return state_.status;
  }
  double dt = schedule_dt();
  const bool final_fragment = remaining <= dt;
  if (final_fragment) dt = remaining;
  if (!final_fragment && dt < cfg_.dt_min) {
    state_.status = RunStatus::DtCollapse;
    return state_.status;
  }

  if (cfg_.stepper == Stepper::SemiImplicit)
    semi_implicit_step(dt);
  else
    explicit_rk2_step(dt);

  if (state_.status != RunStatus::Running) return state_.status;

  state_.t += dt;
  state_.step += 1;
  state_.dt_last = dt;
  if (max_abs(state_.u) > cfg_.overflow_cap) state_.status = RunStatus::Overflow;
  if (state_.status == RunStatus::Running && state_.t >= cfg_.t_end)
    state_.status = RunStatus::Finished;
  return state_.status;
}

void Simulation::semi_implicit_step(double dt) {
  const RadialGrid& g = *grid_;
  const int n = g.n_cells;
  const auto& w = g.cell_measures;
  const auto& s = g.face_measures;
  const Field& v = state_.v;

  for (int i = 0; i < n; ++i) {
    const MotilityEval e = motility_.eval(v[i]);
    gam_[i] = e.gamma;
    dgam_[i] = e.dgamma;
  }

  // I - dt*M, coefficients frozen at t_n
  std::fill(di_.begin(), di_.end(), 1.0);
  std::fill(lo_.begin(), lo_.end(), 0.0);
  std::fill(up_.begin(), up_.end(), 0.0);
  const double inv_dx = 1.0 / g.dx;
  for (int f = 1; f < n; ++f) {
    const int L = f - 1, R = f;
    const double gf = 0.5 * (gam_[L] + gam_[R]);
    const double dgf = 0.5 * (dgam_[L] + dgam_[R]);
    const double dvf = (v[R] - v[L]) * inv_dx;
    const FaceCoeffs c = face_coeffs(gf, dgf, dvf, g.dx, cfg_.advection);
    const double aL = dt * s[f] / w[L];
    const double aR = dt * s[f] / w[R];
    di_[L] -= aL * c.cl;
    up_[L] -= aL * c.cr;
    di_[R] += aR * c.cr;
    lo_[R - 1] += aR * c.cl;
  }

  std::copy(state_.u.values.begin(), state_.u.values.end(), work_.begin());
  solve_tridiag_inplace(lo_, di_, up_, work_);  // throws on a vanishing pivot

  for (double x : work_) {
    if (!std::isfinite(x)) {
      state_.status = RunStatus::Overflow;  // keep the last finite state
      return;
    }
  }

  if (mu_ > 0.0) {
    // exact flow of y' = mu y (1 - y): y -> y / (1 - q + q y), q = 1 - e^{-mu dt}
    const double q = -std::expm1(-mu_ * dt);
    for (double& y : work_) y = y / ((1.0 - q) + q * y);
  }

  state_.u.values.swap(work_);
  helmholtz_.solve_into(state_.u.values, state_.v.values);
}

void Simulation::eval_rhs(const Field& u, const Field& v, std::vector<double>& out) {
  const RadialGrid& g = *grid_;
  const int n = g.n_cells;
  const auto flux = assemble_flux(u, v, motility_, cfg_.advection);
  for (int i = 0; i < n; ++i) {
    out[i] = (g.face_measures[i + 1] * flux[i + 1] - g.face_measures[i] * flux[i]) /
             g.cell_measures[i];
    out[i] += mu_ * u[i] * (1.0 - u[i]);
  }
}

void Simulation::explicit_rk2_step(double dt) {
  const int n = grid_->n_cells;
  eval_rhs(state_.u, state_.v, work_);  // k1
  Field utild(grid_);
  for (int i = 0; i < n; ++i) utild[i] = state_.u[i] + dt * work_[i];
  if (!all_finite(utild)) {
    state_.status = RunStatus::Overflow;
    return;
  }
  Field vtild = helmholtz_.solve(utild);
  eval_rhs(utild, vtild, work2_);  // k2
  for (int i = 0; i < n; ++i) work3_[i] = state_.u[i] + 0.5 * dt * (work_[i] + work2_[i]);
  for (double x : work3_) {
    if (!std::isfinite(x)) {
      state_.status = RunStatus::Overflow;
      return;
    }
  }
  std::copy(work3_.begin(), work3_.end(), state_.u.values.begin());
  helmholtz_.solve_into(state_.u.values, state_.v.values);
}

RunStatus Simulation::run(const Hooks& hooks) {
  if (state_.u.size() == 0) throw std::logic_error("Simulation::run: call reset() first");

  SimState prev = state_;
  long last_sampled = state_.step;
  if (hooks.on_sample) hooks.on_sample(state_, prev, 0.0);

  while (state_.status == RunStatus::Running) {
    const bool want_prev =
        hooks.on_sample &&
        (hooks.sample_every > 0 && (state_.step + 1) % hooks.sample_every == 0);
    if (want_prev) prev = state_;

    const RunStatus st = advance();

    const bool sampled_step =
        hooks.sample_every > 0 && state_.step % hooks.sample_every == 0;
    if (hooks.on_sample && (sampled_step || st != RunStatus::Running) &&
        state_.step != last_sampled) {
      // terminal states are always emitted, with prev only valid on cadence
      // samples (identity residual is NaN otherwise)
      hooks.on_sample(state_, want_prev ? prev : state_, want_prev ? state_.dt_last : 0.0);
      last_sampled = state_.step;
    }
    if (hooks.on_checkpoint && hooks.checkpoint_every > 0 && state_.step != 0 &&
        state_.step % hooks.checkpoint_every == 0)
      hooks.on_checkpoint(state_);
  }
  return state_.status;
}

}  // namespace dsm
