#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace harmonic_ball;
using hb_test::relative_error;

namespace {
double lgamma_oracle_log_volume(int n) { return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0); }
}  // namespace

TEST_CASE("unit ball volume examples", "[geometry]") {
  CHECK(relative_error(unit_ball_volume(1).volume, 2.0) < 1e-14);
  CHECK(relative_error(unit_ball_volume(2).volume, std::numbers::pi) < 1e-14);
  const double v5 = 8 * std::numbers::pi * std::numbers::pi / 15;
  CHECK(relative_error(unit_ball_volume(5).volume, v5) < 1e-12);
  // recursion from V1 and V3
  const double v3 = 4 * std::numbers::pi / 3;
  CHECK(relative_error(v5, 2 * std::numbers::pi / 5 * v3) < 1e-15);
  CHECK(relative_error(unit_ball_volume(3).volume, 2 * std::numbers::pi / 3 * 2.0) < 1e-13);
  CHECK(unit_ball_volume(0).volume == 1.0);
  CHECK_THROWS_AS(unit_ball_volume(-1), DomainError);
}

TEST_CASE("V_100 lives in log space", "[geometry][oracle]") {
  const auto v = unit_ball_volume(100);
  CHECK(relative_error(v.log_volume, lgamma_oracle_log_volume(100)) < 1e-12);
  CHECK(v.log_volume == Catch::Approx(-91.2413).margin(1e-3));
  CHECK(v.volume > 1e-41);
  CHECK(v.volume < 1e-39);
  // Stirling: ln V_n ~ (n/2) ln(2 pi e / n) - (1/2) ln(n pi)
  const double n = 100;
  const double stirling = 0.5 * n * std::log(2 * std::numbers::pi * std::numbers::e / n) - 0.5 * std::log(n * std::numbers::pi);
  CHECK(relative_error(v.log_volume, stirling) < 0.01);
}

TEST_CASE("log_gamma agrees with the C library", "[geometry][oracle]") {
  // relative where |ln Gamma| >= 1, absolute near its zeros at x = 1, 2
  for (double x = 0.5; x <= 600.0; x += 0.25)
    CHECK(std::fabs(log_gamma(x) - std::lgamma(x)) < 1e-13 * std::max(1.0, std::fabs(std::lgamma(x))));
}

TEST_CASE("volume argmax is five", "[geometry]") {
  CHECK(volume_argmax(25) == 5);
  CHECK(volume_argmax(5) == 5);
  CHECK(volume_argmax(1000) == 5);
}

TEST_CASE("shell volume fraction examples", "[geometry]") {
  CHECK(shell_volume_fraction({7, 1.0}) == 0.0);
  CHECK(shell_volume_fraction({2, 0.5}) == Catch::Approx(0.75).margin(1e-15));
  CHECK(relative_error(shell_volume_fraction({100, 0.9}), 1.0 - std::pow(0.9, 100)) < 1e-14);
  CHECK(shell_volume_fraction({100, 0.9}) == Catch::Approx(0.9999734).margin(1e-7));
  CHECK_THROWS_AS(shell_volume_fraction({3, 1.5}), DomainError);
  CHECK_THROWS_AS(shell_volume_fraction({3, -0.1}), DomainError);
}

TEST_CASE("shell fraction agrees with radial sampling", "[geometry][oracle]") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 100;
  const int samples = 400000;
  int hits = 0;
  for (int i = 0; i < samples; ++i)
    if (std::pow(u(rng), 1.0 / n) > 0.9) ++hits;
  const double p = shell_volume_fraction({n, 0.9});
  const double sigma = std::sqrt(p * (1 - p) / samples);
  CHECK(std::fabs(static_cast<double>(hits) / samples - p) < 3 * sigma + 1.0 / samples);
}

TEST_CASE("shell width examples", "[geometry]") {
  CHECK(shell_width_for_mass(1, 0.5) == Catch::Approx(0.5).margin(1e-15));
  CHECK(relative_error(shell_width_for_mass(100, 0.5), 1.0 - std::pow(2.0, -0.01)) < 1e-13);
  CHECK(shell_width_for_mass(100, 0.5) == Catch::Approx(0.006907).margin(1e-6));
  CHECK(shell_width_for_mass(4, 1e-300) < 1e-299);
  CHECK_THROWS_AS(shell_width_for_mass(3, 0.0), DomainError);
  CHECK_THROWS_AS(shell_width_for_mass(3, 1.0), DomainError);
  for (int n = 1; n < 1000; ++n) CHECK(shell_width_for_mass(n + 1, 0.5) < shell_width_for_mass(n, 0.5));
}

TEST_CASE("sphere area examples", "[geometry]") {
  CHECK(relative_error(sphere_area(2, 1.0), 2 * std::numbers::pi) < 1e-14);
  CHECK(relative_error(sphere_area(3, 1.0), 4 * std::numbers::pi) < 1e-14);
  CHECK(relative_error(sphere_area(10, 0.5), 10 * unit_ball_volume(10).volume * std::pow(0.5, 9)) < 1e-13);
  for (int n : {2, 3, 7, 10, 40}) {
    for (double r : {0.3, 0.5, 1.0}) {
      // five-point central difference of V_n r^n
      const double h = 1e-4 * r;
      const double vol = unit_ball_volume(n).volume;
      auto v = [&](double s) { return vol * std::pow(s, n); };
      const double derivative = (v(r - 2 * h) - 8 * v(r - h) + 8 * v(r + h) - v(r + 2 * h)) / (12 * h);
      CHECK(relative_error(sphere_area(n, r), derivative) < 1e-10);
    }
  }
}

TEST_CASE("two-step recursion holds in log space", "[geometry][property]") {
  for (int n = 3; n <= 500; ++n) {
    const double lhs = log_unit_ball_volume(n);
    const double rhs = std::log(2 * std::numbers::pi / n) + log_unit_ball_volume(n - 2);
    CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("shell fraction increases with dimension", "[geometry][property]") {
  for (double r : {0.5, 0.9, 0.99}) {
    for (int n = 1; n < 300; ++n) {
      const double a = shell_volume_fraction({n, r});
      const double b = shell_volume_fraction({n + 1, r});
      if (a < 1.0) CHECK(b > a);
    }
  }
}

TEST_CASE("volume decays beyond five", "[geometry][property]") {
  for (int n = 5; n < 600; ++n) CHECK(log_unit_ball_volume(n + 1) < log_unit_ball_volume(n));
  // ln V_n < -n first holds for good at n = 121; at n = 30 ln V_n is only about -10.7
  CHECK(log_unit_ball_volume(30) == Catch::Approx(-10.7283).margin(1e-4));
  CHECK(log_unit_ball_volume(120) >= -120);
  for (int n = 121; n <= 600; ++n) CHECK(log_unit_ball_volume(n) < -n);
}

TEST_CASE("unit sphere area is n V_n in log space", "[geometry][property]") {
  for (int n = 1; n <= 500; ++n) {
    const double lhs = log_sphere_area(n, 1.0);
    const double rhs = std::log(static_cast<double>(n)) + log_unit_ball_volume(n);
    CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, std::fabs(rhs)));
  }
}
