#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dsmlab/diagnostics.hpp"
#include "dsmlab/initdata.hpp"

using namespace dsm;
namespace nm = std::numbers;

TEST_CASE("ubar point values") {
  CHECK(ubar(1.0, 0.0) == 8.0);
  CHECK(ubar(2.0, 1.0) == doctest::Approx(32.0 / 25.0).epsilon(1e-15));
}

TEST_CASE("bump cutoff properties") {
  CHECK(bump(0.5, 0.25, 0.1) == 1.0);
  CHECK(bump(0.5, 0.25, 0.25) == 1.0);
  CHECK(bump(0.5, 0.25, 0.5) == 0.0);
  CHECK(bump(0.5, 0.25, 0.9) == 0.0);
  CHECK(bump(0.5, 0.25, 0.375) == doctest::Approx(0.5).epsilon(1e-14));
  // monotone: finite-difference sign check at 10^3 points
  double prev = bump(0.5, 0.25, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = i * 1e-3;
    const double b = bump(0.5, 0.25, x);
    REQUIRE(b <= prev + 1e-12);
    REQUIRE(b >= 0.0);
    REQUIRE(b <= 1.0);
    prev = b;
  }
  CHECK_THROWS_AS(bump(0.25, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("construct_blowup matches the paper brackets") {
  auto g = build_grid(Geometry::Disk, 1.0, 4096);
  HelmholtzOperator H(g);
  const double Lam = 10.0 * nm::pi;

  BlowupRecipe rc;
  rc.Lambda = Lam;
  rc.lambda = 10.0;
  rc.r = 0.5;
  rc.r1 = 0.25;
  const BlowupData d10 = construct_blowup(rc, g, H);

  const double f1 = 1.0 - 1.0 / (1.0 + 0.0625);  // f at lambda = 1 with r1 = 0.25
  CHECK(d10.a > Lam / (8.0 * nm::pi));
  CHECK(d10.a < Lam / (8.0 * nm::pi * f1));
  CHECK(std::abs(integrate(d10.u0) - Lam) < 1e-12 * Lam);

  rc.lambda = 100.0;
  const BlowupData d100 = construct_blowup(rc, g, H);
  // f(lambda) -> 1: the amplitude approaches Lambda/8pi from above
  CHECK(std::abs(d100.a - 1.25) < std::abs(d10.a - 1.25));
  CHECK(std::abs(integrate(d100.u0) - Lam) < 1e-12 * Lam);

  // v0 properties: nonnegative, same mass, peaked at the origin
  CHECK(min_value(d100.v0) >= 0.0);
  CHECK(std::abs(integrate(d100.v0) - Lam) < 1e-10 * Lam);
  CHECK(max_value(d100.v0) == d100.v0[0]);
}

TEST_CASE("construct_blowup rejects invalid recipes") {
  auto g = build_grid(Geometry::Disk, 1.0, 1024);
  HelmholtzOperator H(g);
  BlowupRecipe rc;
  rc.Lambda = 10.0 * nm::pi;
  rc.lambda = 10.0;
  rc.r = 0.5;
  rc.r1 = 0.25;

  BlowupRecipe bad = rc;
  bad.Lambda = 12.0 * nm::pi;  // 4 pi * 3
  CHECK_THROWS_AS(construct_blowup(bad, g, H), std::invalid_argument);
  bad.Lambda = 6.0 * nm::pi;  // below 8 pi
  CHECK_THROWS_AS(construct_blowup(bad, g, H), std::invalid_argument);
  bad = rc;
  bad.r1 = 0.7;  // r1 > r
  CHECK_THROWS_AS(construct_blowup(bad, g, H), std::invalid_argument);
  bad = rc;
  bad.lambda = 1e4;  // under-resolved at n=1024
  try {
    construct_blowup(bad, g, H);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("n_cells >=") != std::string::npos);
  }

  auto seg = build_grid(Geometry::Interval, 1.0, 1024);
  HelmholtzOperator Hs(seg);
  CHECK_THROWS_AS(construct_blowup(rc, seg, Hs), std::invalid_argument);
}

TEST_CASE("resolvability rule") {
  auto g = build_grid(Geometry::Disk, 1.0, 2048);
  CHECK(lambda_resolvable(1000.0, *g));
  CHECK_FALSE(lambda_resolvable(2000.0, *g));
  CHECK(min_cells_for_lambda(1000.0, 1.0) <= 2048);
  CHECK(min_cells_for_lambda(1000.0, 1.0) > 1024);
}

TEST_CASE("energy decreases along increasing lambda") {
  auto g = build_grid(Geometry::Disk, 1.0, 4096);
  HelmholtzOperator H(g);
  BlowupRecipe rc;
  rc.Lambda = 10.0 * nm::pi;
  rc.r = 0.5;
  rc.r1 = 0.25;
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
    rc.lambda = lam;
    const BlowupData d = construct_blowup(rc, g, H);
    const double e = energy(d.u0, d.v0);
    REQUIRE(e < prev);
    prev = e;
  }
}

TEST_CASE("standard profiles") {
  auto g = build_grid(Geometry::Disk, 1.0, 512);

  ProfileSpec c;
  c.kind = ProfileSpec::Kind::Constant;
  c.c = 1.0;
  Field u = standard_profile(c, g);
  for (int i = 0; i < u.size(); ++i) CHECK(u[i] == 1.0);

  ProfileSpec p;
  p.kind = ProfileSpec::Kind::Perturbed;
  p.c = 1.0;
  p.eps = 0.0;
  Field up = standard_profile(p, g);
  for (int i = 0; i < up.size(); ++i) CHECK(up[i] == 1.0);

  p.eps = 1.5;
  CHECK_THROWS_AS(standard_profile(p, g), std::invalid_argument);
  p.eps = 0.3;
  Field upp = standard_profile(p, g);
  CHECK(min_value(upp) >= 0.0);

  // Gaussian mass against the closed form 2 pi amp w^2 (1 - e^{-R^2/2w^2})
  ProfileSpec gb;
  gb.kind = ProfileSpec::Kind::GaussianBump;
  gb.amp = 3.0;
  gb.width = 0.2;
  double errs[2];
  int k = 0;
  for (int n : {512, 1024}) {
    auto gg = build_grid(Geometry::Disk, 1.0, n);
    const double w2 = gb.width * gb.width;
    const double exact = 2.0 * nm::pi * gb.amp * w2 * (1.0 - std::exp(-1.0 / (2.0 * w2)));
    errs[k++] = std::abs(integrate(standard_profile(gb, gg)) - exact);
  }
  CHECK(errs[0] / errs[1] > 3.0);
  CHECK(errs[0] / errs[1] < 5.0);

  gb.mass_target = 6.0 * nm::pi;
  Field um = standard_profile(gb, g);
  CHECK(std::abs(integrate(um) - 6.0 * nm::pi) < 1e-12 * 6.0 * nm::pi);

  ProfileSpec bad;
  bad.kind = ProfileSpec::Kind::GaussianBump;
  bad.amp = -1.0;
  CHECK_THROWS_AS(standard_profile(bad, g), std::invalid_argument);
}

TEST_CASE("asymptotics report excludes under-resolved members with a warning") {
  auto g = build_grid(Geometry::Disk, 1.0, 2048);
  HelmholtzOperator H(g);
  const double Lam = 10.0 * nm::pi;
  const std::vector<double> lams{10.0, 100.0, 1000.0, 1e5};
  const AsymptoticsReport rep = verify_construction_asymptotics(Lam, lams, g, H);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.n_fit == 3);
  CHECK(rep.warnings.size() == 1);
  CHECK_FALSE(rep.rows[3].resolved);
  CHECK(rep.energy_slope < 0.0);
  CHECK(rep.interaction_slope > 0.0);
  CHECK(rep.entropy_slope > 0.0);

  const std::vector<double> narrow{10.0, 20.0};
  CHECK_THROWS_AS(verify_construction_asymptotics(Lam, narrow, g, H), std::invalid_argument);
}
