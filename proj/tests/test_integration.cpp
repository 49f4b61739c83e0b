#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace harmonic_ball;
using hb_test::relative_error;

namespace {
MultiIndex random_even_index(std::size_t n, unsigned max_degree, std::mt19937_64& rng) {
  MultiIndex alpha(n);
  std::uniform_int_distribution<std::size_t> axis(0, n - 1);
  std::uniform_int_distribution<unsigned> pairs(0, max_degree / 2);
  const unsigned k = pairs(rng);
  for (unsigned i = 0; i < k; ++i) {
    const auto a = axis(rng);
    alpha.set(a, alpha[a] + 2);
  }
  return alpha;
}
}  // namespace

TEST_CASE("sphere monomial integral examples", "[integration]") {
  for (int n : {1, 2, 3, 6, 11}) {
    CHECK(relative_error(sphere_monomial_integral(n, MultiIndex(n), 1.0).value, sphere_area(n, 1.0)) < 1e-13);
    if (n >= 2) {
      CHECK(sphere_monomial_integral(n, MultiIndex::unit(n, 0), 1.0).value == 0.0);
      CHECK(relative_error(sphere_monomial_integral(n, MultiIndex::unit(n, 0, 2), 1.0).value,
                           unit_ball_volume(n).volume) < 1e-13);
    }
  }
  CHECK_THROWS_AS(sphere_monomial_integral(3, MultiIndex(2), 1.0), DimensionError);
}

TEST_CASE("x1^2 on the sphere agrees with Monte Carlo", "[integration][oracle]") {
  for (int n : {2, 5, 10}) {
    const auto p = MultiPoly<Rational>::monomial(MultiIndex::unit(n, 0, 2));
    const auto mc = integrate_poly_sphere(p, 1.0, QuadratureSpec::monte_carlo(1000000, 42));
    CHECK(mc.standard_error > 0.0);
    CHECK(std::fabs(mc.value - unit_ball_volume(n).volume) < 3 * mc.standard_error);
  }
}

TEST_CASE("ball monomial integral examples", "[integration]") {
  for (int n : {1, 2, 4, 9})
    for (double r : {0.25, 1.0, 2.0})
      CHECK(relative_error(ball_monomial_integral(n, MultiIndex(n), r).value,
                           unit_ball_volume(n).volume * std::pow(r, n)) < 1e-13);
  // spherical coordinates: int_0^1 s^4 ds * int_{S^2} xi_1^2 = (1/5)(4 pi / 3)
  CHECK(relative_error(ball_monomial_integral(3, MultiIndex{2, 0, 0}, 1.0).value, 4 * std::numbers::pi / 15) < 1e-14);
  CHECK(ball_monomial_integral(3, MultiIndex{1, 1, 0}, 0.7).value == 0.0);
  const auto mc = integrate_poly_ball(MultiPoly<Rational>::monomial(MultiIndex{2, 0, 0}), 1.0,
                                      QuadratureSpec::monte_carlo(1000000, 9));
  CHECK(std::fabs(mc.value - 4 * std::numbers::pi / 15) < 3 * mc.standard_error);
}

TEST_CASE("integrate_poly_ball examples", "[integration]") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto g = grad_norm_sq(identity_map(n).body);
    for (double r : {0.3, 0.7, 1.0}) {
      const double want = n * unit_ball_volume(static_cast<int>(n)).volume * std::pow(r, static_cast<double>(n));
      CHECK(relative_error(integrate_poly_ball(g, r).value, want) < 1e-13);
    }
  }
  CHECK(integrate_poly_ball(MultiPoly<Rational>(4), 0.5).value == 0.0);
  const auto q = parse_polynomial("x2^2 + x1^2", 2);
  CHECK(relative_error(integrate_poly_ball(q, 1.0).value, std::numbers::pi / 2) < 1e-14);
  const auto mc = integrate_poly_ball(q, 1.0, QuadratureSpec::monte_carlo(1000000, 3));
  CHECK(std::fabs(mc.value - std::numbers::pi / 2) < 3 * mc.standard_error);
  CHECK_THROWS_AS(integrate_poly_ball(q, 1.0, QuadratureSpec::monte_carlo(0, 3)), DomainError);
  CHECK_THROWS_AS(integrate_poly_ball(q, 0.0), DomainError);
}

TEST_CASE("integrate_poly_sphere examples", "[integration]") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (double r : {0.5, 1.3})
      CHECK(relative_error(integrate_poly_sphere(MultiPoly<Rational>::constant(n, Rational(1)), r).value,
                           sphere_area(static_cast<int>(n), r)) < 1e-13);
  const auto x1sq = parse_polynomial("x1^2", 2);
  CHECK(relative_error(integrate_poly_sphere(x1sq, 1.0).value, std::numbers::pi) < 1e-14);
  const auto mc = integrate_poly_sphere(x1sq, 1.0, QuadratureSpec::monte_carlo(1000000, 5));
  CHECK(std::fabs(mc.value - std::numbers::pi) < 3 * mc.standard_error);
  CHECK(integrate_poly_sphere(parse_polynomial("x1^3 * x2^2 + x3", 3), 0.8).value == 0.0);
  CHECK_THROWS_AS(integrate_poly_sphere(x1sq, 1.0, QuadratureSpec::monte_carlo(0, 1)), DomainError);
}

TEST_CASE("Monte Carlo ball volume", "[integration]") {
  const auto disk = mc_ball_volume(2, 1000000, 17);
  const double p = std::numbers::pi / 4;
  const double sigma = 4 * std::sqrt(p * (1 - p) / 1e6);
  CHECK(disk.standard_error == Catch::Approx(sigma).epsilon(0.01));
  CHECK(std::fabs(disk.value - std::numbers::pi) < 3 * sigma);
  const auto interval = mc_ball_volume(1, 100000, 17);
  CHECK(interval.value == 2.0);
  const auto v20 = mc_ball_volume(20, 1000000, 17, VolumeEstimator::gaussian_ratio);
  CHECK(std::fabs(v20.value - unit_ball_volume(20).volume) < 3 * v20.standard_error);
  CHECK_THROWS_AS(mc_ball_volume(26, 1000, 1), RefusedError);
  const auto v200 = mc_ball_volume(200, 200000, 4, VolumeEstimator::gaussian_ratio);
  CHECK(std::fabs(v200.log_abs_value - log_unit_ball_volume(200)) < 0.05);
}

TEST_CASE("exact and Monte Carlo sphere integrals agree", "[integration][property]") {
  std::mt19937_64 rng(31337);
  for (std::size_t n : {2u, 5u, 10u}) {
    int agree = 0;
    for (int i = 0; i < 10; ++i) {
      const auto alpha = random_even_index(n, 8, rng);
      const auto p = MultiPoly<Rational>::monomial(alpha);
      const double exact = integrate_poly_sphere(p, 1.0).value;
      const auto mc = integrate_poly_sphere(p, 1.0, QuadratureSpec::monte_carlo(1000000, 1000 + i));
      // alpha = 0 has zero variance; allow rounding on top of 3 sigma
      if (std::fabs(mc.value - exact) <= 3 * mc.standard_error + 1e-12 * std::fabs(exact)) ++agree;
    }
    CHECK(agree >= 9);
  }
}

TEST_CASE("gamma form and rational moments agree", "[integration][oracle]") {
  std::mt19937_64 rng(8);
  for (std::size_t n : {2u, 3u, 7u, 30u, 300u}) {
    for (int i = 0; i < 10; ++i) {
      const auto alpha = random_even_index(n, 12, rng);
      const auto gamma = sphere_monomial_integral(static_cast<int>(n), alpha, 0.9);
      const auto rational = integrate_poly_sphere(MultiPoly<Rational>::monomial(alpha), 0.9);
      CHECK(std::fabs(gamma.log_abs_value - rational.log_abs_value) < 1e-12 * std::max(1.0, std::fabs(gamma.log_abs_value)));
    }
  }
}

TEST_CASE("ball integrals scale as r^(n + |alpha|)", "[integration][property]") {
  std::mt19937_64 rng(19);
  for (int n : {2, 4, 9, 40}) {
    for (int i = 0; i < 10; ++i) {
      const auto alpha = random_even_index(n, 10, rng);
      const double one = ball_monomial_integral(n, alpha, 1.0).log_abs_value;
      for (double r : {0.1, 0.5, 0.99}) {
        const double lr = ball_monomial_integral(n, alpha, r).log_abs_value;
        const double want = (n + static_cast<double>(alpha.total_degree())) * std::log(r);
        CHECK(std::fabs((lr - one) - want) < 1e-12 * std::max(1.0, std::fabs(want)));
      }
    }
  }
}

TEST_CASE("exact ball integration is linear", "[integration][property]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto p = hb_test::random_poly(n, 6, 8, rng);
    const auto q = hb_test::random_poly(n, 6, 8, rng);
    const double a = integrate_poly_ball(p, 0.8).value;
    const double b = integrate_poly_ball(q, 0.8).value;
    const double s = integrate_poly_ball(p + q, 0.8).value;
    CHECK(std::fabs(s - (a + b)) <= 1e-12 * std::max({std::fabs(a), std::fabs(b), std::fabs(s), 1e-300}));
  }
}

TEST_CASE("Monte Carlo results are bit-identical across worker counts", "[integration][property]") {
  const auto p = parse_polynomial("x1^2 * x2^4 + 3 * x3 - 1/3", 4);
  const auto one = integrate_poly_ball(p, 0.9, QuadratureSpec::monte_carlo(300001, 77, 1));
  const auto again = integrate_poly_ball(p, 0.9, QuadratureSpec::monte_carlo(300001, 77, 1));
  const auto four = integrate_poly_ball(p, 0.9, QuadratureSpec::monte_carlo(300001, 77, 4));
  const auto seven = integrate_poly_ball(p, 0.9, QuadratureSpec::monte_carlo(300001, 77, 7));
  CHECK(one.value == again.value);
  CHECK(one.value == four.value);
  CHECK(one.value == seven.value);
  CHECK(one.standard_error == seven.standard_error);
  CHECK(mc_ball_volume(7, 100000, 5, VolumeEstimator::gaussian_ratio, 1).value ==
        mc_ball_volume(7, 100000, 5, VolumeEstimator::gaussian_ratio, 3).value);
  CHECK(integrate_poly_ball(p, 0.9, QuadratureSpec::monte_carlo(300001, 78)).value != one.value);
}
