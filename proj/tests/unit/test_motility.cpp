#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dsmlab/motility.hpp"

using namespace dsm;

namespace {

// five-point central stencils, O(h^4)
double fd1(const Motility& m, double s, double h) {
  return (8.0 * (m.gamma(s + h) - m.gamma(s - h)) - (m.gamma(s + 2 * h) - m.gamma(s - 2 * h))) /
         (12.0 * h);
}
double fd2(const Motility& m, double s, double h) {
  return (-m.gamma(s + 2 * h) + 16.0 * m.gamma(s + h) - 30.0 * m.gamma(s) +
          16.0 * m.gamma(s - h) - m.gamma(s - 2 * h)) /
         (12.0 * h * h);
}

}  // namespace

TEST_CASE("eval closed forms") {
  auto exp_m = Motility::exponential();
  auto e0 = exp_m.eval(0.0);
  CHECK(e0.gamma == 1.0);
  CHECK(e0.dgamma == -1.0);
  CHECK(e0.d2gamma == 1.0);

  auto pow_m = Motility::power(1.0, 2.0);
  auto p1 = pow_m.eval(1.0);
  CHECK(p1.gamma == doctest::Approx(1.0));
  CHECK(p1.dgamma == doctest::Approx(-2.0));
  CHECK(p1.d2gamma == doctest::Approx(6.0));

  auto gau = Motility::gauss().eval(1.0);
  const double ie = std::exp(-1.0);
  CHECK(gau.gamma == doctest::Approx(ie).epsilon(1e-14));
  CHECK(gau.dgamma == doctest::Approx(-2.0 * ie).epsilon(1e-14));
  CHECK(gau.d2gamma == doctest::Approx(2.0 * ie).epsilon(1e-14));
}

TEST_CASE("derivatives agree with finite differences at random points") {
  std::mt19937 rng(7);
  const auto kinds = {Motility::exponential(), Motility::power(0.7, 1.5), Motility::gauss(),
                      Motility::double_exp(), Motility::power_log(2.0)};
  for (const auto& m : kinds) {
    const double lo = m.singular_at_zero() ? 0.2 : 0.05;
    const double hi = m.kind() == MotilityKind::DoubleExp ? 3.0 : 5.0;
    std::uniform_real_distribution<double> uni(lo, hi);
    for (int i = 0; i < 1000; ++i) {
      const double s = uni(rng);
      const double h = 1e-3 * (1.0 + s);
      const MotilityEval e = m.eval(s);
      const double scale1 = std::max({std::abs(e.dgamma), e.gamma, 1e-30});
      const double scale2 = std::max({std::abs(e.d2gamma), std::abs(e.dgamma), e.gamma, 1e-30});
      REQUIRE(std::abs(fd1(m, s, h) - e.dgamma) / scale1 < 1e-6);
      REQUIRE(std::abs(fd2(m, s, h) - e.d2gamma) / scale2 < 1e-6);
    }
  }
}

TEST_CASE("gamma is positive and non-increasing") {
  std::mt19937 rng(11);
  const auto kinds = {Motility::exponential(), Motility::power(1.0, 1.0), Motility::gauss(),
                      Motility::double_exp(), Motility::power_log(1.0)};
  for (const auto& m : kinds) {
    const double lo = m.singular_at_zero() ? 1e-3 : 0.0;
    std::uniform_real_distribution<double> uni(lo, 20.0);
    for (int i = 0; i < 500; ++i) {
      double s1 = uni(rng), s2 = uni(rng);
      if (s1 > s2) std::swap(s1, s2);
      const double g1 = m.gamma(s1), g2 = m.gamma(s2);
      REQUIRE(g1 > 0.0);
      REQUIRE(g1 >= g2);
    }
  }
}

TEST_CASE("singular kinds reject evaluation below the cutoff") {
  auto m = Motility::power(1.0, 1.0);
  CHECK_THROWS_AS(m.eval(1e-12), std::domain_error);
  CHECK_THROWS_AS(m.eval(0.0), std::domain_error);
  auto loose = Motility::make(MotilityKind::Power, 1.0, 1.0, 1e-12);
  CHECK(loose.eval(1e-12).gamma > 0.0);
}

TEST_CASE("K0 matches the closed-form suprema") {
  // Exp: ratio e^{-s}, sup 1 at s=0
  CHECK(compute_K0(Motility::exponential(), 50.0, 2000) == doctest::Approx(1.0).epsilon(1e-9));
  // Gauss: ratio 4 s^2 e^{-s^2}, max 4/e at s=1
  const double k0_gauss = compute_K0(Motility::gauss(), 50.0, 200000);
  CHECK(k0_gauss == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-6));
  // DoubleExp: ratio e^{2s - e^s}, max 4 e^{-2} at s = log 2
  const double k0_de = compute_K0(Motility::double_exp(), 50.0, 200000);
  CHECK(k0_de == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-6));
  // Power: ratio k^2 c0 s^{-k-2} diverges at 0
  CHECK(std::isinf(compute_K0(Motility::power(1.0, 1.0), 100.0, 2000)));
  CHECK(std::isinf(compute_K0(Motility::power_log(1.0), 100.0, 2000)));

  CHECK_THROWS_AS(compute_K0(Motility::exponential(), 10.0, 100), std::invalid_argument);
}

TEST_CASE("A2 witness") {
  std::vector<double> probes;
  for (double s = 1.0; s <= 1e6 * 1.0001; s *= 2.0) probes.push_back(s);
  probes.push_back(2e6);

  CHECK(check_A2(Motility::power_log(2.0), 3.0, probes));
  CHECK(check_A2(Motility::power(1.0, 1.0), 2.0, probes));
  CHECK_FALSE(check_A2(Motility::exponential(), 5.0, probes));
  CHECK_FALSE(check_A2(Motility::gauss(), 8.0, probes));
  // s^k * (c0 s^-k) is constant: not "increasing without bound"
  CHECK_FALSE(check_A2(Motility::power(1.0, 2.0), 2.0, probes));

  std::vector<double> bad{1.0, 0.5, 2e6};
  CHECK_THROWS_AS(check_A2(Motility::exponential(), 1.0, bad), std::invalid_argument);
  std::vector<double> shortp{1.0, 10.0};
  CHECK_THROWS_AS(check_A2(Motility::exponential(), 1.0, shortp), std::invalid_argument);
}
