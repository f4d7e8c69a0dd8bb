#include "dsmlab/initdata.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dsmlab/diagnostics.hpp"

namespace dsm {

namespace {
constexpr double kPi = std::numbers::pi;
// lambda * dx at which ubar drops by exactly 50% across the first cell:
// 1 - 1/(1+z^2)^2 = 1/2  =>  z = sqrt(sqrt(2) - 1)
const double kMaxLambdaDx = std::sqrt(std::sqrt(2.0) - 1.0);
}  // namespace

double ubar(double lambda, double xi) {
  const double d = 1.0 + lambda * lambda * xi * xi;
  return 8.0 * lambda * lambda / (d * d);
}

double bump(double r, double r1, double xi) {
  if (!(0.0 < r1 && r1 < r)) throw std::invalid_argument("bump: need 0 < r1 < r");
  if (xi <= r1) return 1.0;
  if (xi >= r) return 0.0;
  const double s = (xi - r1) / (r - r1);
  return 1.0 - (6.0 * s * s - 15.0 * s + 10.0) * s * s * s;
}

int min_cells_for_lambda(double lambda, double extent) {
  return static_cast<int>(std::ceil(lambda * extent / kMaxLambdaDx));
}

bool lambda_resolvable(double lambda, const RadialGrid& g) {
  return lambda * g.dx <= kMaxLambdaDx;
}

BlowupData construct_blowup(const BlowupRecipe& rc, GridPtr grid, const HelmholtzOperator& H) {
  if (grid->geometry != Geometry::Disk)
    throw std::invalid_argument("construct_blowup: the construction is radial (Disk grids only)");
  if (!(rc.Lambda > 8.0 * kPi))
    throw std::invalid_argument("construct_blowup: Lambda must exceed 8*pi");
  const double q = rc.Lambda / (4.0 * kPi);
  if (std::abs(q - std::round(q)) <= 1e-9)
    throw std::invalid_argument("construct_blowup: Lambda must stay away from 4*pi*N");
  if (!(rc.lambda >= 1.0)) throw std::invalid_argument("construct_blowup: lambda must be >= 1");
  if (!(0.0 < rc.r1 && rc.r1 < rc.r && rc.r < grid->extent))
    throw std::invalid_argument("construct_blowup: need 0 < r1 < r < R");
  if (!lambda_resolvable(rc.lambda, *grid))
    throw std::invalid_argument(
        "construct_blowup: lambda under-resolved on this grid (profile varies by > 50% across "
        "the first cell); need n_cells >= " +
        std::to_string(min_cells_for_lambda(rc.lambda, grid->extent)));

  Field raw(grid);
  for (int i = 0; i < grid->n_cells; ++i) {
    const double xi = grid->cell_centers[i];
    raw[i] = ubar(rc.lambda, xi) * bump(rc.r, rc.r1, xi);
  }
  const double mass_raw = integrate(raw);
  if (!(mass_raw > 0.0)) throw std::runtime_error("construct_blowup: degenerate profile");

  BlowupData out;
  out.a = rc.Lambda / mass_raw;
  out.u0 = raw;
  for (double& x : out.u0.values) x *= out.a;
  // one exact rescale absorbs the roundoff of the division above
  const double mass = integrate(out.u0);
  for (double& x : out.u0.values) x *= rc.Lambda / mass;

  // amplitude bracket Lambda/8pi < a < Lambda/(8pi f(1)); the lower end gets a
  // quadrature allowance O((lambda dx)^2) since the midpoint rule overshoots
  // the peak integral by more than the bracket margin 1/(lambda r1)^2 at
  // large lambda
  const double a_lo = rc.Lambda / (8.0 * kPi);
  const double f1 = 1.0 - 1.0 / (1.0 + rc.r1 * rc.r1);
  const double a_hi = rc.Lambda / (8.0 * kPi * f1);
  const double z = rc.lambda * grid->dx;
  if (!(out.a > a_lo * (1.0 - 0.25 * z * z) && out.a < a_hi))
    throw std::runtime_error("construct_blowup: amplitude fell outside the admissible bracket");

  out.v0 = H.solve(out.u0);
  return out;
}

Field standard_profile(const ProfileSpec& spec, GridPtr grid) {
  Field u(grid);
  switch (spec.kind) {
    case ProfileSpec::Kind::Constant:
      if (!(spec.c > 0.0)) throw std::invalid_argument("standard_profile: c must be > 0");
      for (double& x : u.values) x = spec.c;
      break;
    case ProfileSpec::Kind::GaussianBump: {
      if (!(spec.amp > 0.0 && spec.width > 0.0))
        throw std::invalid_argument("standard_profile: amp and width must be > 0");
      const double s2 = 2.0 * spec.width * spec.width;
      for (int i = 0; i < u.size(); ++i) {
        const double xi = grid->cell_centers[i];
        u[i] = spec.amp * std::exp(-xi * xi / s2);
      }
      break;
    }
    case ProfileSpec::Kind::Perturbed: {
      if (!(spec.c > 0.0)) throw std::invalid_argument("standard_profile: c must be > 0");
      if (std::abs(spec.eps) > 1.0)
        throw std::invalid_argument("standard_profile: |eps| > 1 would produce negative values");
      const double L = grid->extent;
      for (int i = 0; i < u.size(); ++i) {
        const double xi = grid->cell_centers[i];
        u[i] = spec.c * (1.0 + spec.eps * std::cos(kPi * xi / L));
      }
      break;
    }
  }
  if (spec.mass_target > 0.0) {
    const double mass = integrate(u);
    if (!(mass > 0.0)) throw std::invalid_argument("standard_profile: zero mass");
    for (double& x : u.values) x *= spec.mass_target / mass;
  }
  return u;
}

AsymptoticsReport verify_construction_asymptotics(double Lambda, std::span<const double> lambdas,
                                                  GridPtr grid, const HelmholtzOperator& H,
                                                  double delta) {
  if (lambdas.size() < 2)
    throw std::invalid_argument("verify_construction_asymptotics: need >= 2 lambdas");
  double lmin = lambdas[0], lmax = lambdas[0];
  for (double l : lambdas) {
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  if (!(lmax >= 100.0 * lmin))
    throw std::invalid_argument("verify_construction_asymptotics: lambdas must span >= 2 decades");

  AsymptoticsReport rep;
  rep.Lambda = Lambda;
  rep.a_ref = Lambda / (8.0 * kPi);
  rep.delta = delta;

  std::vector<double> lx, e_ent, e_int, e_ene;
  for (double l : lambdas) {
    AsymptoticsRow row;
    row.lambda = l;
    BlowupRecipe rc;
    rc.Lambda = Lambda;
    rc.lambda = l;
    if (!lambda_resolvable(l, *grid)) {
      rep.warnings.push_back("lambda=" + std::to_string(l) +
                             " under-resolved (need n_cells >= " +
                             std::to_string(min_cells_for_lambda(l, grid->extent)) +
                             "), excluded from fit");
      rep.rows.push_back(row);
      continue;
    }
    const BlowupData d = construct_blowup(rc, grid, H);
    row.resolved = true;
    row.a = d.a;
    row.entropy = entropy(d.u0);
    row.interaction = interaction(d.u0, d.v0);
    row.energy = energy(d.u0, d.v0);
    rep.rows.push_back(row);
    lx.push_back(std::log(l));
    e_ent.push_back(row.entropy);
    e_int.push_back(row.interaction);
    e_ene.push_back(row.energy);
  }

  rep.n_fit = static_cast<int>(lx.size());
  if (rep.n_fit >= 2) {
    const auto f_ent = fit_trend(lx, e_ent, 2);
    const auto f_int = fit_trend(lx, e_int, 2);
    const auto f_ene = fit_trend(lx, e_ene, 2);
    rep.entropy_slope = f_ent.slope;
    rep.interaction_slope = f_int.slope;
    rep.energy_slope = f_ene.slope;
  }
  rep.entropy_bound = 16.0 * rep.a_ref * kPi * (1.0 + delta);
  rep.interaction_bound = 32.0 * kPi * rep.a_ref * rep.a_ref * (1.0 - delta);
  rep.energy_bound = -2.0 * Lambda * (Lambda / (8.0 * kPi) - 1.0);
  rep.entropy_ok = rep.n_fit >= 2 && rep.entropy_slope <= rep.entropy_bound;
  rep.interaction_ok = rep.n_fit >= 2 && rep.interaction_slope >= rep.interaction_bound;
  rep.energy_ok = rep.n_fit >= 2 && rep.energy_slope <= rep.energy_bound;
  return rep;
}

}  // namespace dsm
