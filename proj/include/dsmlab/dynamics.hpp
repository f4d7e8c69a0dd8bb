#pragma once

#include <functional>

#include "dsmlab/elliptic.hpp"
#include "dsmlab/grid.hpp"
#include "dsmlab/motility.hpp"

namespace dsm {

enum class Stepper { SemiImplicit, ExplicitRK2 };
enum class AdvectionScheme { Hybrid, Upwind, Central };
enum class RunStatus { Running, Finished, Overflow, DtCollapse };

struct SchemeConfig {
  Stepper stepper = Stepper::SemiImplicit;
  AdvectionScheme advection = AdvectionScheme::Hybrid;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double cfl_safety = 0.8;
  double t_end = 1.0;
  double overflow_cap = 1e12;

  void validate() const;  // throws std::invalid_argument
};

struct SimState {
  Field u;
  Field v;  // always solve(helmholtz, u) of the stored u
  double t = 0.0;
  long step = 0;
  double dt_last = 0.0;
  RunStatus status = RunStatus::Running;
};

/// Face flux of u_t = div F with
///   F_{i+1/2} = gamma_f * (du)_f + u_face * gamma'_f * (dv)_f,
/// gamma, gamma' averaged to faces, boundary faces zero. The advective face
/// value u_face is the donor cell (Upwind), the arithmetic mean (Central), or
/// Péclet-switched (Hybrid: central while |gamma' dv| dx / gamma_f <= 2, the
/// M-matrix limit, donor cell beyond).
std::vector<double> assemble_flux(const Field& u, const Field& v, const Motility& m,
                                  AdvectionScheme scheme = AdvectionScheme::Hybrid);

/// One run of u_t = div(gamma(v) grad u + u gamma'(v) grad v) + mu u(1-u),
/// v = (I - Lap)^{-1} u refreshed after every u update.
///
/// SemiImplicit freezes v and the flux coefficients at t_n, solves the
/// tridiagonal backward-Euler system for u (M-matrix: conservative and
/// positivity-preserving), then applies the exact pointwise logistic flow.
/// ExplicitRK2 is a Heun step of the full right side under the parabolic CFL
/// dt <= cfl_safety * dx^2 / (2 max gamma).
class Simulation {
 public:
  Simulation(GridPtr grid, Motility m, double mu, SchemeConfig cfg);

  /// Validates u0 >= 0 and u0 not identically zero.
  void reset(const Field& u0);
  /// Checkpoint restore: state resumes bit-identically when the dt schedule
  /// is deterministic.
  void restore(std::span<const double> u, double t, long step);

  const SimState& state() const { return state_; }
  const HelmholtzOperator& helmholtz() const { return helmholtz_; }
  const Motility& motility() const { return motility_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double mu() const { return mu_; }
  const SchemeConfig& scheme() const { return cfg_; }

  /// Advances one step (status must be Running). Returns the new status.
  RunStatus advance();

  struct Hooks {
    long sample_every = 0;  // 0: only the initial and final states are sampled
    std::function<void(const SimState& cur, const SimState& prev, double dt)> on_sample;
    long checkpoint_every = 0;
    std::function<void(const SimState&)> on_checkpoint;
  };

  /// Walks advance() until t_end / Overflow / DtCollapse, firing hooks.
  /// Deterministic given the configuration.
  RunStatus run(const Hooks& hooks);
  RunStatus run() { return run(Hooks{}); }

 private:
  double schedule_dt() const;
  void semi_implicit_step(double dt);
  void explicit_rk2_step(double dt);
  void eval_rhs(const Field& u, const Field& v, std::vector<double>& out);

  GridPtr grid_;
  Motility motility_;
  double mu_;
  SchemeConfig cfg_;
  HelmholtzOperator helmholtz_;
  SimState state_;

  // scratch (one run is strictly sequential; distinct runs own their own)
  std::vector<double> gam_, dgam_, lo_, di_, up_, work_, work2_, work3_;
};

const char* to_string(RunStatus s);

}  // namespace dsm
