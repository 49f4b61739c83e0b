#pragma once

// Harmonic polynomial maps in arbitrary dimension: the identity map, zonal
// solid harmonics and random harmonic polynomials. Every constructor
// certifies its output with is_harmonic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "random.hpp"

namespace harmonic_ball {

template <class Coeff>
struct HarmonicMap {
  VectorPoly<Coeff> body;
  std::optional<unsigned> degree;  // set iff every term of every component has this degree
  bool certified = false;
  std::string label;

  std::size_t dimension() const { return body.dimension(); }
  bool is_constant() const { return body.is_constant(); }
};

namespace detail {

template <class Coeff>
double certification_tolerance(const VectorPoly<Coeff>& u) {
  double largest = 1.0;
  for (const auto& c : u.components())
    for (const auto& [alpha, v] : c.terms()) largest = std::max(largest, CoeffTraits<Coeff>::magnitude(v));
  return 1e-10 * largest;
}

template <class Coeff>
std::optional<unsigned> common_degree(const VectorPoly<Coeff>& u) {
  std::optional<unsigned> degree;
  for (const auto& c : u.components())
    for (const auto& [alpha, v] : c.terms()) {
      const unsigned d = alpha.total_degree();
      if (degree && *degree != d) return std::nullopt;
      degree = d;
    }
  if (!degree) return 0u;  // the zero map is homogeneous of every degree; report 0
  return degree;
}

}  // namespace detail

/// Wraps a polynomial map, recording homogeneity and whether it is harmonic.
/// Exact coefficients are certified exactly; floating ones within 1e-10 of
/// the largest coefficient.
template <class Coeff>
HarmonicMap<Coeff> make_harmonic_map(VectorPoly<Coeff> body, std::string label) {
  HarmonicMap<Coeff> m;
  m.degree = detail::common_degree(body);
  if constexpr (CoeffTraits<Coeff>::is_exact) m.certified = is_harmonic(body);
  else m.certified = is_harmonic(body, detail::certification_tolerance(body));
  m.body = std::move(body);
  m.label = std::move(label);
  return m;
}

/// u(x) = x on R^n.
inline HarmonicMap<Rational> identity_map(std::size_t n) {
  if (n < 1) throw DomainError("identity map needs n >= 1");
  VectorPoly<Rational> body(n);
  for (std::size_t i = 0; i < n; ++i) body.push_back(MultiPoly<Rational>::variable(n, i));
  return make_harmonic_map(std::move(body), "identity(n=" + std::to_string(n) + ")");
}

/// Constant map with value `c` in every one of `arity` components.
inline HarmonicMap<Rational> constant_map(std::size_t n, std::size_t arity, const Rational& c) {
  VectorPoly<Rational> body(n);
  for (std::size_t i = 0; i < arity; ++i) body.push_back(MultiPoly<Rational>::constant(n, c));
  return make_harmonic_map(std::move(body), "constant(n=" + std::to_string(n) + ")");
}

/// Degree-k zonal solid harmonic |x|^k C_k^{(n/2-1)}(<x,axis>/|x|) about `axis`.
///
/// The three-term Gegenbauer recurrence runs on the formal pair
/// (t, s) = (<x, axis>, |x|^2):
///   k Z_k = 2 (k + lambda - 1) t Z_{k-1} - (k + 2 lambda - 2) s Z_{k-2},
///   Z_0 = 1, Z_1 = 2 lambda t,
/// and the result is substituted at the end. For n = 2 (lambda = 0) the
/// Chebyshev limit Z_k = 2 t Z_{k-1} - s Z_{k-2}, Z_1 = t, is used instead.
/// The normalisation is the standard Gegenbauer one.
template <class Coeff>
HarmonicMap<Coeff> zonal_solid_harmonic(std::size_t n, unsigned k, std::span<const Coeff> axis) {
  if (n < 1) throw DomainError("zonal harmonic needs n >= 1");
  if (axis.size() != n) throw DimensionError("axis length must equal n");
  Coeff norm2(0);
  for (const auto& a : axis) norm2 += a * a;
  if constexpr (CoeffTraits<Coeff>::is_exact) {
    if (norm2 != Coeff(1)) throw DomainError("axis must have unit norm");
  } else {
    if (std::fabs(norm2 - 1.0) > 1e-12) throw DomainError("axis must have unit norm");
  }
  if (n == 1 && k >= 2) throw RefusedError("harmonic polynomials in one dimension are affine; degree >= 2 refused");

  MultiPoly<Coeff> t_of_x(n);
  for (std::size_t i = 0; i < n; ++i) t_of_x.add_term(MultiIndex::unit(n, i), axis[i]);
  t_of_x *= Coeff(1);
  const std::string label = "zonal(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";

  if (n == 1) {
    VectorPoly<Coeff> body(n);
    body.push_back(k == 0 ? MultiPoly<Coeff>::constant(n, Coeff(1)) : t_of_x);
    return make_harmonic_map(std::move(body), label);
  }

  // Formal variables: index 0 is t, index 1 is s.
  using Formal = MultiPoly<Coeff>;
  const Formal t = Formal::variable(2, 0);
  const Formal s = Formal::variable(2, 1);
  const Coeff lambda = Coeff(static_cast<int>(n) - 2) / Coeff(2);
  const bool chebyshev = n == 2;

  Formal previous = Formal::constant(2, Coeff(1));
  Formal current = chebyshev ? t : t * (Coeff(2) * lambda);
  if (k == 0) current = previous;
  for (unsigned j = 2; j <= k; ++j) {
    Formal next(2);
    if (chebyshev) {
      next = t * current * Coeff(2) - s * previous;
    } else {
      const Coeff jj(static_cast<int>(j));
      next = (t * current * (Coeff(2) * (jj + lambda - Coeff(1))) - s * previous * (jj + Coeff(2) * lambda - Coeff(2))) *
             (Coeff(1) / jj);
    }
    previous = std::move(current);
    current = std::move(next);
  }

  VectorPoly<Coeff> substitution(n, {t_of_x, MultiPoly<Coeff>::norm_squared(n)});
  VectorPoly<Coeff> body(n);
  body.push_back(compose(current, substitution));
  return make_harmonic_map(std::move(body), label);
}

/// Zonal harmonic about the first coordinate axis.
inline HarmonicMap<Rational> zonal_solid_harmonic(std::size_t n, unsigned k) {
  std::vector<Rational> axis(n, Rational(0));
  if (n > 0) axis[0] = 1;
  return zonal_solid_harmonic<Rational>(n, k, axis);
}

/// Homogeneous components of p, keyed by degree.
template <class Coeff>
std::vector<std::pair<unsigned, MultiPoly<Coeff>>> homogeneous_parts(const MultiPoly<Coeff>& p) {
  std::vector<std::pair<unsigned, MultiPoly<Coeff>>> parts;
  for (const auto& [alpha, c] : p.terms()) {
    const unsigned d = alpha.total_degree();
    if (parts.empty() || parts.back().first != d) parts.emplace_back(d, MultiPoly<Coeff>(p.dimension()));
    parts.back().second.add_term(alpha, c);
  }
  return parts;
}

/// Harmonic part of each homogeneous component of p.
///
/// A homogeneous p of degree m splits as p = h_m + |x|^2 q with h_m harmonic
/// (Fischer/Almansi decomposition); the harmonic part is
///   h_m = sum_j c_j |x|^{2j} Laplacian^j p,
///   c_j = (-1)^j / prod_{i<j} (2i + 2)(n + 2m - 2i - 4).
/// Already harmonic input is returned unchanged.
template <class Coeff>
MultiPoly<Coeff> harmonic_projection(const MultiPoly<Coeff>& p) {
  const std::size_t n = p.dimension();
  const MultiPoly<Coeff> r2 = MultiPoly<Coeff>::norm_squared(n);
  MultiPoly<Coeff> result(n);
  for (const auto& [m, part] : homogeneous_parts(p)) {
    MultiPoly<Coeff> h = part;
    MultiPoly<Coeff> lap = part;
    MultiPoly<Coeff> r_power = MultiPoly<Coeff>::constant(n, Coeff(1));
    Coeff c(1);
    for (unsigned j = 1; 2 * j <= m; ++j) {
      lap = laplacian(lap);
      if (lap.is_zero()) break;
      r_power *= r2;
      const int i = static_cast<int>(j) - 1;
      c *= Coeff(-1) / (Coeff(2 * i + 2) * Coeff(static_cast<int>(n) + 2 * static_cast<int>(m) - 2 * i - 4));
      h += r_power * lap * c;
    }
    result += h;
  }
  return result;
}

/// A random homogeneous degree-k polynomial with coefficients in [-3, 3],
/// projected onto its harmonic part. Deterministic in (n, k, seed).
inline HarmonicMap<Rational> random_harmonic_polynomial(std::size_t n, unsigned k, std::uint64_t seed) {
  if (n < 1) throw DomainError("random harmonic needs n >= 1");
  ShardStream stream(seed, (static_cast<std::uint64_t>(n) << 32) | k);
  MultiPoly<Rational> p(n);
  // Enumerate exponent vectors of total degree k in graded-lex order.
  std::vector<unsigned> exps(n, 0);
  auto emit = [&](auto&& self, std::size_t axis, unsigned remaining) -> void {
    if (axis + 1 == n) {
      exps[axis] = remaining;
      const int c = static_cast<int>(stream.next_bits() % 7) - 3;
      p.add_term(MultiIndex(exps.begin(), exps.end()), Rational(c));
      return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
      exps[axis] = e;
      self(self, axis + 1, remaining - e);
    }
  };
  emit(emit, 0, k);
  VectorPoly<Rational> body(n);
  body.push_back(harmonic_projection(p));
  auto map = make_harmonic_map(std::move(body), "random(n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                                                    ",seed=" + std::to_string(seed) + ")");
  if (map.body[0].is_zero()) map.degree = k;
  return map;
}

/// dim of degree-k harmonic polynomials on R^n:
/// C(n+k-1, k) - C(n+k-3, k-2), second term 0 for k < 2.
inline std::uint64_t harmonic_space_dimension(unsigned n, unsigned k) {
  if (n < 1) throw DomainError("dimension must be positive");
  auto binom = [](long long top, long long bottom) -> std::uint64_t {
    if (bottom < 0 || top < bottom) return 0;
    std::uint64_t r = 1;
    for (long long i = 1; i <= bottom; ++i) r = r * static_cast<std::uint64_t>(top - bottom + i) / static_cast<std::uint64_t>(i);
    return r;
  };
  const std::uint64_t all = binom(static_cast<long long>(n) + k - 1, k);
  const std::uint64_t traces = k < 2 ? 0 : binom(static_cast<long long>(n) + k - 3, static_cast<long long>(k) - 2);
  return all - traces;
}

}  // namespace harmonic_ball
