#pragma once

#include <span>

#include "dsmlab/grid.hpp"
#include "dsmlab/tridiag.hpp"

namespace dsm {

/// Discrete Helmholtz operator A = I - Lap_h with Neumann closure,
/// (A f)_i = f_i - (1/w_i) [ s_{i+1/2} (f_{i+1}-f_i)/dx - s_{i-1/2} (f_i-f_{i-1})/dx ],
/// boundary face fluxes dropped. Row sums are exactly 1 (constants are fixed
/// points of the inverse) and w_i A_ij = w_j A_ji, so the inverse preserves
/// integrals and is self-adjoint in the w-weighted inner product.
///
/// The factorization is computed once per grid; solve() is reentrant.
class HelmholtzOperator {
 public:
  explicit HelmholtzOperator(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  /// Solves A g = f. Rejects non-finite input with std::invalid_argument.
  Field solve(const Field& f) const;
  void solve_into(std::span<const double> f, std::span<double> g) const;

  /// Applies A (residual checks, Newton assembly).
  Field apply(const Field& f) const;
  void apply_into(std::span<const double> f, std::span<double> out) const;

  std::span<const double> lower() const { return lower_; }
  std::span<const double> diag() const { return diag_; }
  std::span<const double> upper() const { return upper_; }

 private:
  GridPtr grid_;
  std::vector<double> lower_, diag_, upper_;
  TridiagFactor factor_;
};

/// Discrete comparison principle: given f1 <= f2 pointwise, checks that
/// solve(f1) <= solve(f2) pointwise (up to `tol` * scale slack for roundoff).
bool min_comparison_check(const HelmholtzOperator& op, const Field& f1, const Field& f2,
                          double tol = 1e-12);

}  // namespace dsm
