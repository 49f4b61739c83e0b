#pragma once

// Integrals of polynomials over balls B_r and spheres dB_r in R^n.
//
// Exact route: for an even multi-index alpha,
//   int_{S^{n-1}} xi^alpha dS = |S^{n-1}| * prod_i (alpha_i - 1)!! / prod_{j < |alpha|/2} (n + 2j),
// a rational multiple of the sphere area, so a polynomial integral is
// |S^{n-1}| times an exact rational (for exact coefficients). Odd monomials
// integrate to zero. The single-monomial operations use the independent
// gamma-function form 2 prod Gamma(b_i) / Gamma(sum b_i), b_i = (alpha_i+1)/2,
// evaluated in log space.
//
// Monte Carlo route: directions are normalised standard Gaussians; ball
// radii use the inverse CDF s = r U^(1/n).

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"
#include "random.hpp"
#include "special_functions.hpp"

namespace harmonic_ball {

enum class QuadratureMethod { exact, monte_carlo };

inline std::string to_string(QuadratureMethod m) {
  return m == QuadratureMethod::exact ? "exact" : "monte_carlo";
}

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::exact;
  std::uint64_t samples = 0;  // MC only
  std::uint64_t seed = 0;     // MC only
  double tolerance = 1e-10;
  unsigned workers = 1;  // wall time only; never changes results

  static QuadratureSpec exact() { return {}; }
  static QuadratureSpec monte_carlo(std::uint64_t samples, std::uint64_t seed, unsigned workers = 1) {
    return {QuadratureMethod::monte_carlo, samples, seed, 1e-10, workers};
  }
};

struct IntegralResult {
  double value = 0.0;
  double log_abs_value = -std::numeric_limits<double>::infinity();
  double standard_error = 0.0;
  QuadratureMethod method = QuadratureMethod::exact;

  static IntegralResult exact_value(SignedLog v) {
    return {v.to_double(), v.log_abs, 0.0, QuadratureMethod::exact};
  }
};

/// Samples per MC shard. Part of the reproducibility contract: changing it
/// changes the random numbers each sample sees.
inline constexpr std::uint64_t mc_shard_size = 1u << 14;

/// Exact ratio (int_{S^{n-1}} xi^alpha dS) / |S^{n-1}|, n = alpha.dimension().
inline Rational sphere_moment_ratio(const MultiIndex& alpha) {
  if (!alpha.all_even()) return Rational(0);
  Integer num = 1;
  for (unsigned a : alpha)
    for (unsigned j = 1; j < a; j += 2) num *= j;
  Integer den = 1;
  const unsigned half = alpha.total_degree() / 2;
  for (unsigned j = 0; j < half; ++j) den *= static_cast<unsigned>(alpha.dimension()) + 2 * j;
  return Rational(num, den);
}

inline double sphere_moment_ratio_double(const MultiIndex& alpha) {
  if (!alpha.all_even()) return 0.0;
  double v = 1.0;
  unsigned j = 0;
  const auto n = static_cast<double>(alpha.dimension());
  for (unsigned a : alpha)
    for (unsigned k = 1; k < a; k += 2) v *= static_cast<double>(k) / (n + 2.0 * j++);
  return v;
}

/// int_{dB_r} x^alpha dS through the gamma-function closed form in log space.
inline IntegralResult sphere_monomial_integral(int n, const MultiIndex& alpha, double r) {
  if (alpha.dimension() != static_cast<std::size_t>(n)) throw DimensionError("multi-index length must equal n");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  if (!alpha.all_even()) return IntegralResult::exact_value(SignedLog::zero());
  double log_value = std::log(2.0);
  double beta_sum = 0.0;
  for (unsigned a : alpha) {
    const double beta = 0.5 * (a + 1.0);
    log_value += log_gamma(beta);
    beta_sum += beta;
  }
  log_value -= log_gamma(beta_sum);
  log_value += (n - 1 + static_cast<double>(alpha.total_degree())) * std::log(r);
  return IntegralResult::exact_value(SignedLog::from_log(log_value));
}

inline IntegralResult ball_monomial_integral(int n, const MultiIndex& alpha, double r) {
  auto s = sphere_monomial_integral(n, alpha, 1.0);
  if (s.value == 0.0 && s.log_abs_value == -std::numeric_limits<double>::infinity()) return s;
  const double k = n + static_cast<double>(alpha.total_degree());
  const double log_value = s.log_abs_value + k * std::log(r) - std::log(k);
  return IntegralResult::exact_value(SignedLog::from_log(log_value));
}

namespace detail {

/// A double is a dyadic rational; convert without rounding.
inline Rational exact_rational(double x) {
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational q{Integer(scaled)};
  const int shift = exponent - 53;
  if (shift >= 0) q *= Rational(Integer(1) << shift);
  else q /= Rational(Integer(1) << -shift);
  return q;
}

/// Sphere moments grouped by total degree: d -> sum_{|alpha| = d} c_alpha M(alpha).
template <class Coeff>
std::map<unsigned, Coeff> moments_by_degree(const MultiPoly<Coeff>& p) {
  std::map<unsigned, Coeff> out;
  for (const auto& [alpha, c] : p.terms()) {
    if (!alpha.all_even()) continue;
    Coeff m;
    if constexpr (CoeffTraits<Coeff>::is_exact) m = sphere_moment_ratio(alpha);
    else m = sphere_moment_ratio_double(alpha);
    out[alpha.total_degree()] += c * m;
  }
  return out;
}

/// |S^{n-1}| * r^offset * sum_d Q_d r^d / (d + divisor_shift) (divisor omitted if
/// divisor_shift < 0). Rational inputs are summed exactly with r taken as the
/// exact dyadic value of the double.
template <class Coeff>
IntegralResult combine_radial(const MultiPoly<Coeff>& p, double r, int offset, int divisor_shift) {
  const int n = static_cast<int>(p.dimension());
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const auto moments = moments_by_degree(p);
  const SignedLog scale = SignedLog::from_log(log_sphere_area(n, 1.0) + offset * std::log(r));
  SignedLog sum;
  double linear_sum = 0.0;
  if constexpr (CoeffTraits<Coeff>::is_exact) {
    const Rational rq = exact_rational(r);
    Rational total = 0;
    for (const auto& [d, q] : moments) {
      if (q == 0) continue;
      Rational term = q;
      for (unsigned i = 0; i < d; ++i) term *= rq;
      if (divisor_shift >= 0) term /= static_cast<unsigned>(static_cast<int>(d) + divisor_shift);
      total += term;
    }
    if (total != 0) sum = SignedLog::from_log(log_abs(total), total < 0 ? -1 : 1);
    linear_sum = total.convert_to<double>();
  } else {
    const double lr = std::log(r);
    for (const auto& [d, q] : moments) {
      if (q == 0.0) continue;
      double log_term = std::log(std::fabs(q)) + d * lr;
      if (divisor_shift >= 0) log_term -= std::log(static_cast<double>(static_cast<int>(d) + divisor_shift));
      sum = sum + SignedLog::from_log(log_term, q < 0 ? -1 : 1);
      double term = q * std::pow(r, static_cast<double>(d));
      if (divisor_shift >= 0) term /= static_cast<double>(static_cast<int>(d) + divisor_shift);
      linear_sum += term;
    }
  }
  IntegralResult res = IntegralResult::exact_value(scale * sum);
  // Use the direct product when both factors are representable; it skips
  // the exp(log) round trip.
  const double s = scale.to_double();
  const double direct = s * linear_sum;
  if (s > 0.0 && std::isfinite(direct) && direct != 0.0 && !sum.is_zero()) {
    res.value = direct;
    res.log_abs_value = std::log(std::fabs(direct));
  }
  return res;
}

struct ShardMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

/// Runs `sample(stream)` over spec.samples draws in shards and returns
/// (mean, standard error of the mean). Each shard works on its own copy of
/// `sample`, so samplers may keep scratch state.
template <class Sampler>
std::pair<double, double> monte_carlo_mean(const QuadratureSpec& spec, Sampler sample) {
  if (spec.samples == 0) throw DomainError("Monte Carlo integration needs at least one sample");
  const std::uint64_t shards = (spec.samples + mc_shard_size - 1) / mc_shard_size;
  auto partial = run_indexed(shards, spec.workers, [&](std::size_t shard) {
    ShardStream stream(spec.seed, shard);
    Sampler local = sample;
    const std::uint64_t begin = shard * mc_shard_size;
    const std::uint64_t end = std::min<std::uint64_t>(spec.samples, begin + mc_shard_size);
    ShardMoments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = local(stream);
      m.sum += v;
      m.sum_sq += v * v;
      ++m.count;
    }
    return m;
  });
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& m : partial) {
    sum += m.sum;
    sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(spec.samples);
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

inline IntegralResult mc_result(double scale, std::pair<double, double> mean_se) {
  const double value = scale * mean_se.first;
  return {value, value == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(value)),
          std::fabs(scale) * mean_se.second, QuadratureMethod::monte_carlo};
}

}  // namespace detail

/// int_{B_r} p dx.
template <class Coeff>
IntegralResult integrate_poly_ball(const MultiPoly<Coeff>& p, double r, const QuadratureSpec& spec = {}) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const int n = static_cast<int>(p.dimension());
  if (spec.method == QuadratureMethod::exact) {
    if (p.is_zero()) return IntegralResult::exact_value(SignedLog::zero());
    return detail::combine_radial(p, r, n, n);
  }
  const auto lowered = [&] {
    if constexpr (CoeffTraits<Coeff>::is_exact) return lower(p);
    else return p;
  }();
  const double volume = std::exp(log_unit_ball_volume(n) + n * std::log(r));
  auto stats = detail::monte_carlo_mean(spec, [&, point = std::vector<double>(n)](ShardStream& s) mutable {
    s.unit_direction(point);
    const double radius = r * std::pow(s.uniform_open_zero(), 1.0 / n);
    for (double& v : point) v *= radius;
    return evaluate(lowered, point);
  });
  return detail::mc_result(volume, stats);
}

/// int_{dB_r} p dS.
template <class Coeff>
IntegralResult integrate_poly_sphere(const MultiPoly<Coeff>& p, double r, const QuadratureSpec& spec = {}) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const int n = static_cast<int>(p.dimension());
  if (spec.method == QuadratureMethod::exact) {
    if (p.is_zero()) return IntegralResult::exact_value(SignedLog::zero());
    return detail::combine_radial(p, r, n - 1, -1);
  }
  const auto lowered = [&] {
    if constexpr (CoeffTraits<Coeff>::is_exact) return lower(p);
    else return p;
  }();
  const double area = sphere_area(n, r);
  auto stats = detail::monte_carlo_mean(spec, [&, point = std::vector<double>(n)](ShardStream& s) mutable {
    s.unit_direction(point);
    for (double& v : point) v *= r;
    return evaluate(lowered, point);
  });
  return detail::mc_result(area, stats);
}

enum class VolumeEstimator { hit_or_miss, gaussian_ratio };

/// Largest dimension for hit-or-miss sampling from [-1, 1]^n. The acceptance
/// ratio is V_n / 2^n, about 2.5e-8 at n = 25, so beyond this almost no sample
/// lands in the ball.
inline constexpr int hit_or_miss_max_dimension = 25;

/// Monte Carlo estimate of Vol(B^n).
///
/// hit_or_miss counts cube samples inside the ball. gaussian_ratio draws
/// X ~ N(0, I/n) and averages 1{|X| < 1} / density(X); the weights are
/// bounded on the ball, so it works in any dimension.
inline IntegralResult mc_ball_volume(int n, std::uint64_t samples, std::uint64_t seed,
                                     VolumeEstimator estimator = VolumeEstimator::hit_or_miss,
                                     unsigned workers = 1) {
  if (n < 1) throw DomainError("dimension must be positive");
  const auto spec = QuadratureSpec::monte_carlo(samples, seed, workers);
  if (estimator == VolumeEstimator::hit_or_miss) {
    if (n > hit_or_miss_max_dimension)
      throw RefusedError("hit-or-miss volume estimate refused for n = " + std::to_string(n) +
                         ": acceptance ratio V_n/2^n is too small for any feasible sample count;"
                         " use the gaussian_ratio estimator");
    auto stats = detail::monte_carlo_mean(spec, [n](ShardStream& s) {
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = 2.0 * s.uniform() - 1.0;
        norm2 += x * x;
      }
      return norm2 < 1.0 ? 1.0 : 0.0;
    });
    return detail::mc_result(std::ldexp(1.0, n), stats);
  }
  // density(x) = (2 pi sigma^2)^(-n/2) exp(-|x|^2 / (2 sigma^2)), sigma^2 = 1/n.
  // Weight on the ball = exp(L) * exp((|x|^2 - 1) n / 2) with
  // L = (n/2) ln(2 pi / n) + n/2, the weight's maximum.
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  const double log_max = 0.5 * n * std::log(2.0 * std::numbers::pi / n) + 0.5 * n;
  auto stats = detail::monte_carlo_mean(spec, [n, sigma](ShardStream& s) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sigma * s.normal();
      norm2 += x * x;
    }
    return norm2 < 1.0 ? std::exp(0.5 * n * (norm2 - 1.0)) : 0.0;
  });
  const double mean = stats.first;
  const double log_value = log_max + std::log(mean);
  return {std::exp(log_value), log_value, std::exp(log_max) * stats.second, QuadratureMethod::monte_carlo};
}

}  // namespace harmonic_ball
