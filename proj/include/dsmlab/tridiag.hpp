#pragma once

#include <span>
#include <vector>

namespace dsm {

/// LU factorization of a constant tridiagonal matrix, no pivoting.
/// Valid for diagonally dominant matrices and M-matrices (all uses here);
/// construction throws std::runtime_error on a vanishing pivot.
class TridiagFactor {
 public:
  TridiagFactor() = default;
  TridiagFactor(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper);

  int size() const { return static_cast<int>(inv_piv_.size()); }

  /// Solves A x = rhs. Reentrant: no shared mutable state.
  void solve_into(std::span<const double> rhs, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> mult_;     // n-1 elimination multipliers
  std::vector<double> inv_piv_;  // n   reciprocal pivots
  std::vector<double> upper_;    // n-1
};

/// One-shot Thomas solve; overwrites all inputs, result lands in rhs_x.
/// Same no-pivoting caveat as above.
void solve_tridiag_inplace(std::span<double> lower, std::span<double> diag,
                           std::span<double> upper, std::span<double> rhs_x);

/// Tridiagonal solve with partial pivoting (row swaps, one fill-in band).
/// Used where diagonal dominance is not guaranteed (Newton Jacobians).
/// Returns false if the matrix is numerically singular; x is then unspecified.
bool solve_tridiag_pivot(std::span<const double> lower, std::span<const double> diag,
                         std::span<const double> upper, std::span<const double> rhs,
                         std::span<double> x);

}  // namespace dsm
