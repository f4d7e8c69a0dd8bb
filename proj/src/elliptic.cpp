#include "dsmlab/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace dsm {

HelmholtzOperator::HelmholtzOperator(GridPtr grid) : grid_(std::move(grid)) {
  const int n = grid_->n_cells;
  const double dx = grid_->dx;
  const auto& w = grid_->cell_measures;
  const auto& s = grid_->face_measures;

  lower_.assign(static_cast<size_t>(n) - 1, 0.0);
  diag_.assign(static_cast<size_t>(n), 1.0);
  upper_.assign(static_cast<size_t>(n) - 1, 0.0);

  for (int f = 1; f < n; ++f) {  // interior faces only; boundary fluxes are zero
    const int L = f - 1, R = f;
    const double cL = s[f] / (w[L] * dx);
    const double cR = s[f] / (w[R] * dx);
    diag_[L] += cL;
    upper_[L] = -cL;
    diag_[R] += cR;
    lower_[R - 1] = -cR;
  }
  factor_ = TridiagFactor(lower_, diag_, upper_);
}

void HelmholtzOperator::solve_into(std::span<const double> f, std::span<double> g) const {
  factor_.solve_into(f, g);
}

Field HelmholtzOperator::solve(const Field& f) const {
  if (!all_finite(f)) throw std::invalid_argument("HelmholtzOperator::solve: non-finite input");
  Field g(grid_);
  factor_.solve_into(f.values, g.values);
  return g;
}

void HelmholtzOperator::apply_into(std::span<const double> f, std::span<double> out) const {
  const size_t n = diag_.size();
  for (size_t i = 0; i < n; ++i) {
    double v = diag_[i] * f[i];
    if (i > 0) v += lower_[i - 1] * f[i - 1];
    if (i + 1 < n) v += upper_[i] * f[i + 1];
    out[i] = v;
  }
}

Field HelmholtzOperator::apply(const Field& f) const {
  Field out(grid_);
  apply_into(f.values, out.values);
  return out;
}

bool min_comparison_check(const HelmholtzOperator& op, const Field& f1, const Field& f2,
                          double tol) {
  Field g1 = op.solve(f1);
  Field g2 = op.solve(f2);
  const double scale = std::max(max_abs(g1), max_abs(g2));
  for (int i = 0; i < g1.size(); ++i)
    if (g1[i] > g2[i] + tol * scale) return false;
  return true;
}

}  // namespace dsm
