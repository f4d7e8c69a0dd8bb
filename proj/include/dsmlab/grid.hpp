#pragma once

#include <memory>
#include <span>
#include <vector>

namespace dsm {

enum class Geometry { Interval, Disk };

/// Uniform cell-centered grid on [0, L] (Interval) or on the radial
/// coordinate of the disk B_R(0) in the plane (Disk).
///
/// Cell i spans [face_positions[i], face_positions[i+1]] with center
/// xi_i = (i + 1/2) * dx. Disk measures carry the 2*pi*xi Jacobian so that
/// the cell measures sum to the exact domain area pi*R^2 (midpoint centers
/// make the sum telescope exactly); for the Interval they sum to L.
/// face_measures[0] is zero on the Disk: the symmetry axis carries no flux.
struct RadialGrid {
  Geometry geometry = Geometry::Interval;
  double extent = 1.0;  // L or R
  int n_cells = 0;
  double dx = 0.0;
  std::vector<double> cell_centers;    // n
  std::vector<double> face_positions;  // n + 1
  std::vector<double> cell_measures;   // n   (w_i)
  std::vector<double> face_measures;   // n+1 (s at faces)

  double domain_measure() const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Requires n_cells >= 8 and extent > 0; throws std::invalid_argument otherwise.
GridPtr build_grid(Geometry geometry, double extent, int n_cells);

/// Scalar field sampled at cell centers.
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(GridPtr g, double fill = 0.0);

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

bool all_finite(const Field& f);
double max_abs(const Field& f);
double max_value(const Field& f);
double min_value(const Field& f);

/// sum_i w_i f_i
double integrate(const Field& f);

/// Central difference (f_{i+1} - f_i)/dx at interior faces, 0 at both
/// boundary faces (Neumann closure). Length n_cells + 1.
std::vector<double> face_gradient(const Field& f);

/// (1/w_i) * (s_{i+1/2} F_{i+1/2} - s_{i-1/2} F_{i-1/2}). Boundary faces of
/// `face_flux` are taken as given (callers set them to zero under Neumann).
std::vector<double> divergence(const RadialGrid& g, std::span<const double> face_flux);

}  // namespace dsm
