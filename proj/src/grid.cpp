#include "dsmlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsm {

double RadialGrid::domain_measure() const {
  if (geometry == Geometry::Disk) return std::numbers::pi * extent * extent;
  return extent;
}

GridPtr build_grid(Geometry geometry, double extent, int n_cells) {
  if (n_cells < 8) throw std::invalid_argument("build_grid: n_cells must be >= 8");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("build_grid: extent must be positive and finite");

  auto g = std::make_shared<RadialGrid>();
  g->geometry = geometry;
  g->extent = extent;
  g->n_cells = n_cells;
  g->dx = extent / n_cells;
  g->cell_centers.resize(n_cells);
  g->face_positions.resize(n_cells + 1);
  g->cell_measures.resize(n_cells);
  g->face_measures.resize(n_cells + 1);

  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i <= n_cells; ++i) {
    const double xf = (i == n_cells) ? extent : i * g->dx;  // anchor both endpoints exactly
    g->face_positions[i] = xf;
    g->face_measures[i] = (geometry == Geometry::Disk) ? two_pi * xf : 1.0;
  }
  for (int i = 0; i < n_cells; ++i) {
    const double xc = (i + 0.5) * g->dx;
    g->cell_centers[i] = xc;
    g->cell_measures[i] = (geometry == Geometry::Disk) ? two_pi * xc * g->dx : g->dx;
  }
  return g;
}

Field::Field(GridPtr g, double fill) : grid(std::move(g)) {
  values.assign(static_cast<size_t>(grid->n_cells), fill);
}

bool all_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_value(const Field& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f.values) m = std::max(m, v);
  return m;
}

double min_value(const Field& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f.values) m = std::min(m, v);
  return m;
}

double integrate(const Field& f) {
  const auto& w = f.grid->cell_measures;
  double s = 0.0;
  for (size_t i = 0; i < f.values.size(); ++i) s += w[i] * f.values[i];
  return s;
}

std::vector<double> face_gradient(const Field& f) {
  const int n = f.size();
  std::vector<double> g(static_cast<size_t>(n) + 1, 0.0);
  const double inv_dx = 1.0 / f.grid->dx;
  for (int i = 1; i < n; ++i) g[i] = (f.values[i] - f.values[i - 1]) * inv_dx;
  return g;
}

std::vector<double> divergence(const RadialGrid& g, std::span<const double> face_flux) {
  if (face_flux.size() != static_cast<size_t>(g.n_cells) + 1)
    throw std::invalid_argument("divergence: face_flux has wrong length");
  std::vector<double> out(static_cast<size_t>(g.n_cells));
  for (int i = 0; i < g.n_cells; ++i) {
    out[i] = (g.face_measures[i + 1] * face_flux[i + 1] - g.face_measures[i] * face_flux[i]) /
             g.cell_measures[i];
  }
  return out;
}

}  // namespace dsm
