#pragma once

#include <vector>

#include "dsmlab/elliptic.hpp"
#include "dsmlab/grid.hpp"

namespace dsm {

struct SteadyOptions {
  double tol = 1e-10;  // sup-norm residual target
  int max_iter = 100;
};

struct SteadyEntry {
  double Lambda = 0;
  Field v;
  Field u;  // Lambda e^v / integral(e^v), rescaled to integrate to Lambda exactly
  double energy = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  double v_max = 0;
};

/// Damped Newton for the mean-field stationary system A v = Lambda e^v / S,
/// S = integral of e^v. The Jacobian is tridiagonal plus a rank-one term,
/// solved by Sherman-Morrison so each iteration stays O(n). Exponentials are
/// evaluated with a max-shift, so large v never overflows. Non-convergence is
/// reported through the flag, never an exception.
SteadyEntry newton_steady(double Lambda, const HelmholtzOperator& H, const Field& guess,
                          const SteadyOptions& opts = {});

struct SteadyBranch {
  std::vector<SteadyEntry> entries;

  /// min energy over converged entries: an upper estimate of the energy floor
  /// (the true floor is an infimum over all solutions; only the found ones
  /// bound it). +inf when nothing converged.
  double best_energy() const;
};

/// Marches Lambda from start to end in `steps` increments, warm-starting each
/// Newton solve from the previous solution (first from the constant state).
/// Non-convergence at a Lambda is recorded and the sweep continues.
SteadyBranch continuation_sweep(double Lambda_start, double Lambda_end, int steps, GridPtr grid,
                                const SteadyOptions& opts = {});

}  // namespace dsm
