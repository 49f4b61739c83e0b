#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace harmonic_ball;

namespace {

// Rank of a set of polynomials over Q, by exact Gaussian elimination on
// their coefficient vectors.
std::size_t rational_rank(const std::vector<MultiPoly<Rational>>& polys) {
  std::vector<MultiIndex> basis;
  for (const auto& p : polys)
    for (const auto& [alpha, c] : p.terms())
      if (std::find(basis.begin(), basis.end(), alpha) == basis.end()) basis.push_back(alpha);
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : polys) {
    std::vector<Rational> row;
    for (const auto& alpha : basis) row.push_back(p.coefficient(alpha));
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < basis.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < basis.size(); ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::vector<MultiPoly<Rational>> monomials_of_degree(std::size_t n, unsigned k) {
  std::vector<MultiPoly<Rational>> out;
  std::vector<unsigned> exps(n, 0);
  auto rec = [&](auto&& self, std::size_t axis, unsigned remaining) -> void {
    if (axis + 1 == n) {
      exps[axis] = remaining;
      out.push_back(MultiPoly<Rational>::monomial(MultiIndex(exps.begin(), exps.end())));
      return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
      exps[axis] = e;
      self(self, axis + 1, remaining - e);
    }
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace

TEST_CASE("identity map", "[harmonics]") {
  const auto u = identity_map(3);
  REQUIRE(u.body.arity() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(u.body[i] == MultiPoly<Rational>::variable(3, i));
  CHECK(u.certified);
  CHECK(u.degree == 1u);
  CHECK(u.label == "identity(n=3)");
  for (std::size_t n = 1; n <= 20; ++n)
    CHECK(hb_test::relative_error(dirichlet_energy(identity_map(n), 1.0),
                                  n * unit_ball_volume(static_cast<int>(n)).volume) < 1e-13);
}

TEST_CASE("zonal harmonic examples", "[harmonics]") {
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(zonal_solid_harmonic(n, 0).body[0] == MultiPoly<Rational>::constant(n, Rational(1)));
    const auto z1 = zonal_solid_harmonic(n, 1).body[0];
    REQUIRE(z1.size() == 1);
    CHECK(z1.coefficient(MultiIndex::unit(n, 0)) > 0);
  }
  const auto z = zonal_solid_harmonic(3, 2);
  CHECK(z.certified);
  CHECK(z.degree == 2u);
  const auto hand = parse_polynomial("2 * x1^2 - x2^2 - x3^2", 3);
  // proportional to 2 x1^2 - x2^2 - x3^2
  CHECK(z.body[0] * Rational(2) == hand);
  CHECK(laplacian(z.body[0]).is_zero());
  CHECK_THROWS_AS(zonal_solid_harmonic(1, 2), RefusedError);
  CHECK(zonal_solid_harmonic(1, 1).certified);
  const std::vector<Rational> not_unit{Rational(1), Rational(1)};
  CHECK_THROWS_AS(zonal_solid_harmonic<Rational>(2, 2, not_unit), DomainError);
}

TEST_CASE("n = 2 zonal harmonics are Re (x1 + i x2)^k", "[harmonics][oracle]") {
  const auto z3 = zonal_solid_harmonic(2, 3).body[0];
  CHECK(z3 == parse_polynomial("x1^3 - 3 * x1 * x2^2", 2));
  const auto z4 = zonal_solid_harmonic(2, 4).body[0];
  CHECK(z4 == parse_polynomial("x1^4 - 6 * x1^2 * x2^2 + x2^4", 2));
}

TEST_CASE("zonal harmonics are certified over a range of n and k", "[harmonics][property]") {
  for (std::size_t n = 2; n <= 12; ++n)
    for (unsigned k = 0; k <= 7; ++k) {
      const auto z = zonal_solid_harmonic(n, k);
      CHECK(z.certified);
      CHECK(laplacian(z.body[0]).is_zero());
      CHECK(z.body[0].is_homogeneous(k));
      CHECK_FALSE(z.body[0].is_zero());
    }
}

TEST_CASE("random harmonic examples", "[harmonics]") {
  const auto h1 = random_harmonic_polynomial(4, 1, 3);
  CHECK(h1.certified);
  CHECK(h1.body[0].is_homogeneous(1));
  const auto lin = parse_polynomial("3 * x1 - x2 + 2 * x4", 4);
  CHECK(harmonic_projection(lin) == lin);
  CHECK(harmonic_projection(MultiPoly<Rational>::norm_squared(5)).is_zero());

  const auto h = random_harmonic_polynomial(2, 3, 42);
  CHECK(h.certified);
  CHECK(h.label == "random(n=2,k=3,seed=42)");
  const auto& p = h.body[0];
  const Rational a = p.coefficient(MultiIndex{3, 0});
  const Rational b = -p.coefficient(MultiIndex{0, 3});
  const auto re = parse_polynomial("x1^3 - 3 * x1 * x2^2", 2);
  const auto im = parse_polynomial("3 * x1^2 * x2 - x2^3", 2);
  CHECK(p == re * a + im * b);
  CHECK(random_harmonic_polynomial(2, 3, 42).body == h.body);
  CHECK(random_harmonic_polynomial(2, 3, 43).body != h.body);
}

TEST_CASE("harmonic space dimension examples", "[harmonics]") {
  CHECK(harmonic_space_dimension(2, 3) == 2);
  CHECK(harmonic_space_dimension(3, 2) == 5);
  for (unsigned n = 1; n <= 9; ++n) CHECK(harmonic_space_dimension(n, 0) == 1);
  for (unsigned k = 0; k <= 10; ++k) CHECK(harmonic_space_dimension(3, k) == 2 * k + 1);
}

TEST_CASE("projector image has the predicted dimension", "[harmonics][oracle]") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (unsigned k = 0; k <= 4; ++k) {
      std::vector<MultiPoly<Rational>> images;
      for (const auto& m : monomials_of_degree(n, k)) {
        images.push_back(harmonic_projection(m));
        CHECK(laplacian(images.back()).is_zero());
      }
      CHECK(rational_rank(images) == harmonic_space_dimension(static_cast<unsigned>(n), k));
    }
}

TEST_CASE("homogeneous outputs scale as lambda^k", "[harmonics][property]") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lam(0.1, 2.0);
  for (std::size_t n : {2u, 3u, 6u}) {
    for (unsigned k : {1u, 2u, 4u}) {
      for (const auto& h : {zonal_solid_harmonic(n, k), random_harmonic_polynomial(n, k, 9)}) {
        for (int i = 0; i < 10; ++i) {
          const double l = lam(rng);
          auto x = hb_test::random_point(n, rng);
          const double base = evaluate(h.body[0], x);
          for (auto& v : x) v *= l;
          const double scaled = evaluate(h.body[0], x);
          CHECK(std::fabs(scaled - std::pow(l, k) * base) <= 1e-10 * std::max(1.0, std::fabs(scaled)));
        }
      }
    }
  }
}

TEST_CASE("zonal harmonics rotate with their axis", "[harmonics][property]") {
  std::mt19937_64 rng(12);
  for (std::size_t n : {2u, 3u, 5u}) {
    for (unsigned k : {1u, 2u, 3u, 5u}) {
      const auto rot = hb_test::random_rotation(n, rng);
      std::vector<double> axis(n), transpose(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        axis[i] = rot[i * n];
        for (std::size_t j = 0; j < n; ++j) transpose[i * n + j] = rot[j * n + i];
      }
      const auto direct = zonal_solid_harmonic<double>(n, k, axis).body[0];
      const auto rotated = compose_linear<double>(lower(zonal_solid_harmonic(n, k).body[0]), transpose);
      const auto diff = direct - rotated;
      double worst = 0.0;
      for (const auto& [alpha, c] : diff.terms()) worst = std::max(worst, std::fabs(c));
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("harmonic projection is idempotent", "[harmonics][property]") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (unsigned k = 0; k <= 5; ++k) {
      const auto z = zonal_solid_harmonic(n, k).body[0];
      CHECK(harmonic_projection(z) == z);
      const auto h = random_harmonic_polynomial(n, std::min(k, 4u), 21).body[0];
      CHECK(harmonic_projection(h) == h);
      CHECK(harmonic_projection(harmonic_projection(h)) == harmonic_projection(h));
    }
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = hb_test::random_poly(3, 5, 8, rng);
    const auto once = harmonic_projection(p);
    CHECK(laplacian(once).is_zero());
    CHECK(harmonic_projection(once) == once);
  }
}
