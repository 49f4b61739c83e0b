#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace harmonic_ball;
using hb_test::relative_error;

namespace {
const double pi = std::numbers::pi;

HarmonicMap<Rational> z_squared() {
  return make_harmonic_map(
      VectorPoly<Rational>(2, {parse_polynomial("x1^2 - x2^2", 2), parse_polynomial("2 * x1 * x2", 2)}), "z^2");
}
}  // namespace

TEST_CASE("Pohozaev examples", "[identities]") {
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto rep = pohozaev_residual(identity_map(n), 1.0);
    const double v = unit_ball_volume(static_cast<int>(n)).volume;
    CHECK(relative_error(rep.lhs + 1e-300, (n - 2.0) * n * v + 1e-300) < 1e-12);
    CHECK(std::fabs(rep.rhs - (n * n * v - 2.0 * n * v)) < 1e-12 * n * n * v);
    CHECK(rep.normalized_residual < 1e-12);
    CHECK(rep.identity == IdentityName::pohozaev);
  }
  const auto zz = z_squared();
  for (double r : {0.3, 1.0}) {
    const auto rep = pohozaev_residual(zz, r);
    CHECK(rep.lhs == 0.0);
    const double total = surface_energy_total(zz, r);
    const double normal = normal_energy(zz, r);
    CHECK(std::fabs(r * total - 2 * r * normal) < 1e-13 * total);
    CHECK(rep.normalized_residual < 1e-12);
  }
  const auto c = pohozaev_residual(constant_map(3, 2, Rational(4)), 0.5);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  CHECK(c.normalized_residual == 0.0);
}

TEST_CASE("Green examples", "[identities]") {
  for (std::size_t n = 1; n <= 12; ++n)
    for (double r : {0.3, 0.7, 1.0}) {
      const auto rep = green_residual(identity_map(n), r);
      const double want = n * unit_ball_volume(static_cast<int>(n)).volume * std::pow(r, static_cast<double>(n));
      CHECK(relative_error(rep.lhs, want) < 1e-13);
      CHECK(relative_error(rep.rhs, want) < 1e-13);
    }
  const auto z = zonal_solid_harmonic(3, 2);
  const auto rep = green_residual(z, 1.0);
  const double euler = 2.0 * integrate_poly_sphere(z.body[0] * z.body[0], 1.0).value;
  CHECK(relative_error(rep.rhs, euler) < 1e-13);
  CHECK(relative_error(rep.lhs, euler) < 1e-13);
  const auto c = green_residual(constant_map(2, 1, Rational(1)), 1.0);
  CHECK(c.residual == 0.0);
}

TEST_CASE("identities refuse uncertified input", "[identities]") {
  const auto bowl = make_harmonic_map(VectorPoly<Rational>::scalar(MultiPoly<Rational>::norm_squared(3)), "bowl");
  CHECK_FALSE(bowl.certified);
  CHECK_THROWS_AS(pohozaev_residual(bowl, 1.0), RefusedError);
  CHECK_THROWS_AS(green_residual(bowl, 1.0), RefusedError);
  CHECK_THROWS_AS(pohozaev_residual(identity_map(3), 0.0), DomainError);
  CHECK_THROWS_AS(green_residual(identity_map(3), 1.5), DomainError);
}

TEST_CASE("minimiser bound examples", "[identities]") {
  const auto four = minimiser_bound_check(identity_map(4));
  CHECK(relative_error(four.margin_ratio, 3.0) < 1e-12);
  const double v4 = unit_ball_volume(4).volume;
  CHECK(relative_error(four.lhs, 4 * v4) < 1e-13);
  CHECK(relative_error(four.rhs, 12 * v4) < 1e-13);
  CHECK(four.holds);
  CHECK(relative_error(minimiser_bound_check(identity_map(3)).margin_ratio, 4.0) < 1e-12);
  const auto z = minimiser_bound_check(zonal_solid_harmonic(5, 2));
  CHECK(z.holds);
  CHECK(z.margin_ratio > 1.0);
  CHECK_THROWS_AS(minimiser_bound_check(identity_map(2)), RefusedError);
  CHECK_THROWS_AS(minimiser_bound_check(constant_map(4, 1, Rational(1))), RefusedError);
}

TEST_CASE("c1 bound examples", "[identities]") {
  const auto ten = c1_bound_report(identity_map(10));
  CHECK(ten.c1 == 0.25);
  CHECK(relative_error(ten.margin_ratio, 2.25) < 1e-12);
  CHECK(ten.holds);
  CHECK(ten.identity == IdentityName::c1_bound);
  CHECK(c1_bound_report(zonal_solid_harmonic(4, 3)).holds);
  double previous = 0.0;
  for (std::size_t n = 3; n <= 200; ++n) {
    const double c1n = c1_bound_report(identity_map(n)).c1 * static_cast<double>(n);
    CHECK(c1n > 2.0);
    if (n > 3) CHECK(c1n < previous);
    previous = c1n;
  }
  CHECK(std::fabs(previous - 2.0) < 0.03);
}

TEST_CASE("volume decay chain", "[identities]") {
  const auto chain = volume_decay_chain(3, 200);
  const auto& first = chain.rows.front();
  CHECK(first.n == 3);
  CHECK(relative_error(first.volume, 4 * pi / 3) < 1e-14);
  CHECK(relative_error(first.energy, 4 * pi) < 1e-14);
  CHECK(relative_error(first.surface_dirichlet, 8 * pi) < 1e-14);
  CHECK(relative_error(first.implied_bound, 16 * pi / 3) < 1e-14);
  CHECK(relative_error(first.implied_bound / first.volume, 4.0) < 1e-14);
  CHECK(chain.argmax_h == 9);
  CHECK(chain.sup_attained_inside);
  CHECK(relative_error(chain.sup_h, 237.49264099718692) < 1e-12);
  for (const auto& row : chain.rows) {
    CHECK(row.volume <= row.implied_bound);
    CHECK(row.running_sup_h <= chain.sup_h);
  }
  CHECK_THROWS_AS(volume_decay_chain(2, 10), DomainError);
}

TEST_CASE("identity suite is clean and sorted", "[identities][property]") {
  IdentitySuiteOptions opt;
  opt.n_max = 5;
  opt.zonal_max_degree = 3;
  opt.random_max_degree = 3;
  const auto reports = run_identity_suite(opt);
  CHECK(reports.size() == 4 * (1 + 4 + 4) * 3 * 2);
  CHECK(std::is_sorted(reports.begin(), reports.end(), report_less));
  for (const auto& r : reports) CHECK(r.normalized_residual < 1e-10);
  opt.workers = 3;
  const auto parallel = run_identity_suite(opt);
  REQUIRE(parallel.size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(parallel[i].map_label == reports[i].map_label);
    CHECK(parallel[i].residual == reports[i].residual);
  }
}

TEST_CASE("normalised residuals are scale invariant", "[identities][property]") {
  for (const auto& u : {zonal_solid_harmonic(4, 3), random_harmonic_polynomial(3, 4, 2), identity_map(5)}) {
    for (const Rational lambda : {Rational(1, 3), Rational(7)}) {
      const auto scaled = make_harmonic_map(u.body.scaled(lambda), u.label);
      const double l2 = std::pow(lambda.convert_to<double>(), 2);
      for (double r : {0.3, 1.0}) {
        const auto base = pohozaev_residual(u, r);
        const auto s = pohozaev_residual(scaled, r);
        CHECK(relative_error(s.lhs, l2 * base.lhs) < 1e-12);
        CHECK(std::fabs(s.residual - l2 * base.residual) <= 1e-12 * l2 * base.energy);
        CHECK(std::fabs(s.normalized_residual - base.normalized_residual) < 1e-12);
        const auto gb = green_residual(u, r);
        const auto gs = green_residual(scaled, r);
        CHECK(relative_error(gs.rhs, l2 * gb.rhs) < 1e-12);
        CHECK(std::fabs(gs.normalized_residual - gb.normalized_residual) < 1e-12);
      }
    }
  }
}

TEST_CASE("Pohozaev sides scale as r^(n + 2k - 2)", "[identities][property]") {
  for (std::size_t n : {3u, 4u, 7u})
    for (unsigned k : {1u, 2u, 3u}) {
      const auto z = zonal_solid_harmonic(n, k);
      const auto one = pohozaev_residual(z, 1.0);
      for (double r : {0.3, 0.7}) {
        const auto rep = pohozaev_residual(z, r);
        const double want = std::pow(r, static_cast<double>(n + 2 * k - 2));
        CHECK(relative_error(rep.lhs / one.lhs, want) < 1e-12);
        CHECK(relative_error(rep.rhs / one.rhs, want) < 1e-12);
      }
    }
}

TEST_CASE("minimiser bound margin exceeds one on the suite", "[identities][property]") {
  IdentitySuiteOptions opt;
  opt.n_min = 3;
  opt.n_max = 7;
  for (const auto& u : identity_suite_maps(opt)) {
    if (u.is_constant()) continue;
    const auto rep = minimiser_bound_check(u);
    CHECK(rep.margin_ratio > 1.0);
    CHECK(rep.holds);
  }
  for (std::size_t n = 3; n <= 50; ++n)
    CHECK(relative_error(minimiser_bound_check(identity_map(n)).margin_ratio, 2.0 * (n - 1.0) / (n - 2.0)) < 1e-12);
}
