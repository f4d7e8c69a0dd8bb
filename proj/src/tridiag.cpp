#include "dsmlab/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace dsm {

TridiagFactor::TridiagFactor(std::span<const double> lower, std::span<const double> diag,
                             std::span<const double> upper) {
  const size_t n = diag.size();
  if (lower.size() != n - 1 || upper.size() != n - 1)
    throw std::invalid_argument("TridiagFactor: band lengths must be n-1");
  mult_.resize(n - 1);
  inv_piv_.resize(n);
  upper_.assign(upper.begin(), upper.end());

  double piv = diag[0];
  if (piv == 0.0 || !std::isfinite(piv)) throw std::runtime_error("TridiagFactor: zero pivot");
  inv_piv_[0] = 1.0 / piv;
  for (size_t i = 1; i < n; ++i) {
    mult_[i - 1] = lower[i - 1] * inv_piv_[i - 1];
    piv = diag[i] - mult_[i - 1] * upper_[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) throw std::runtime_error("TridiagFactor: zero pivot");
    inv_piv_[i] = 1.0 / piv;
  }
}

void TridiagFactor::solve_into(std::span<const double> rhs, std::span<double> x) const {
  const size_t n = inv_piv_.size();
  x[0] = rhs[0];
  for (size_t i = 1; i < n; ++i) x[i] = rhs[i] - mult_[i - 1] * x[i - 1];
  x[n - 1] *= inv_piv_[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) * inv_piv_[i];
}

std::vector<double> TridiagFactor::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.size());
  solve_into(rhs, x);
  return x;
}

void solve_tridiag_inplace(std::span<double> lower, std::span<double> diag,
                           std::span<double> upper, std::span<double> rhs_x) {
  const size_t n = diag.size();
  if (diag[0] == 0.0) throw std::runtime_error("solve_tridiag_inplace: zero pivot");
  for (size_t i = 1; i < n; ++i) {
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs_x[i] -= m * rhs_x[i - 1];
    if (diag[i] == 0.0) throw std::runtime_error("solve_tridiag_inplace: zero pivot");
  }
  rhs_x[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) rhs_x[i] = (rhs_x[i] - upper[i] * rhs_x[i + 1]) / diag[i];
}

bool solve_tridiag_pivot(std::span<const double> lower, std::span<const double> diag,
                         std::span<const double> upper, std::span<const double> rhs,
                         std::span<double> x) {
  const size_t n = diag.size();
  // Working bands: d (diag), u1 (super), u2 (fill-in from row swaps).
  std::vector<double> lo(lower.begin(), lower.end());
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> u1(n, 0.0), u2(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) u1[i] = upper[i];
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i];

  for (size_t i = 0; i + 1 < n; ++i) {
    double a = d[i], b = lo[i];
    if (std::abs(b) > std::abs(a)) {
      std::swap(d[i], lo[i]);
      std::swap(u1[i], d[i + 1]);
      std::swap(u2[i], u1[i + 1]);
      std::swap(x[i], x[i + 1]);
      a = d[i];
      b = lo[i];
    }
    if (a == 0.0 || !std::isfinite(a)) return false;
    const double m = b / a;
    d[i + 1] -= m * u1[i];
    u1[i + 1] -= m * u2[i];
    x[i + 1] -= m * x[i];
  }
  if (d[n - 1] == 0.0 || !std::isfinite(d[n - 1])) return false;

  x[n - 1] /= d[n - 1];
  if (n >= 2) {
    if (d[n - 2] == 0.0) return false;
    x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2];
  }
  for (size_t k = n; k-- > 0;) {
    if (k + 2 >= n) continue;  // last two rows handled above
    if (d[k] == 0.0) return false;
    x[k] = (x[k] - u1[k] * x[k + 1] - u2[k] * x[k + 2]) / d[k];
  }
  return true;
}

}  // namespace dsm
