#pragma once

// Dirichlet energies of polynomial maps on balls and spheres, energy
// profiles over radii, and the decay-law checks built on them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "harmonics.hpp"
#include "integration.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"

namespace harmonic_ball {

/// sum_i <x, grad u^i>^2, i.e. r^2 |d_nu u|^2 on dB_r.
template <class Coeff>
MultiPoly<Coeff> radial_energy_density(const VectorPoly<Coeff>& u) {
  MultiPoly<Coeff> r(u.dimension());
  for (const auto& c : u.components()) {
    const auto d = radial_derivative(c);
    if (!d.is_zero()) r += d * d;
  }
  return r;
}

/// sum_i u^i <x, grad u^i>, i.e. r * sum_i u^i d_nu u^i on dB_r.
template <class Coeff>
MultiPoly<Coeff> flux_density(const VectorPoly<Coeff>& u) {
  MultiPoly<Coeff> r(u.dimension());
  for (const auto& c : u.components()) {
    const auto d = radial_derivative(c);
    if (!d.is_zero()) r += c * d;
  }
  return r;
}

/// The three polynomial integrands every energy check needs, built once per map.
template <class Coeff>
struct EnergyDensities {
  MultiPoly<Coeff> grad_sq;  // |grad u|^2
  MultiPoly<Coeff> radial;   // sum_i <x, grad u^i>^2
  MultiPoly<Coeff> flux;     // sum_i u^i <x, grad u^i>

  static EnergyDensities of(const VectorPoly<Coeff>& u) {
    return {grad_norm_sq(u), radial_energy_density(u), flux_density(u)};
  }
};

namespace detail {
inline void check_radius(double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive, got " + std::to_string(r));
}
}  // namespace detail

/// E(r) = int_{B_r} |grad u|^2 dx.
template <class Coeff>
double dirichlet_energy(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  detail::check_radius(r);
  return integrate_poly_ball(grad_norm_sq(u.body), r, spec).value;
}

/// int_{dB_r} |grad u|^2 dS.
template <class Coeff>
double surface_energy_total(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  detail::check_radius(r);
  return integrate_poly_sphere(grad_norm_sq(u.body), r, spec).value;
}

/// int_{dB_r} |d_nu u|^2 dS with d_nu u^i = <x, grad u^i> / |x|.
template <class Coeff>
double normal_energy(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  detail::check_radius(r);
  return integrate_poly_sphere(radial_energy_density(u.body), r, spec).value / (r * r);
}

/// H(r) = int_{dB_r} |grad_tan u|^2 dS, computed as total minus normal energy.
template <class Coeff>
double surface_dirichlet(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  return surface_energy_total(u, r, spec) - normal_energy(u, r, spec);
}

struct ProfileSample {
  double r = 0.0;
  double energy = 0.0;
  double log_energy = 0.0;
};

struct EnergyProfile {
  std::string map_label;
  std::size_t dimension = 0;
  std::optional<unsigned> degree;
  std::vector<ProfileSample> samples;
  QuadratureSpec method;
};

/// Dyadic radii {2^-j_max, ..., 1/2, 1} in increasing order.
inline std::vector<double> dyadic_radii(unsigned levels) {
  std::vector<double> radii;
  for (unsigned j = levels + 1; j-- > 0;) radii.push_back(std::ldexp(1.0, -static_cast<int>(j)));
  return radii;
}

template <class Coeff>
EnergyProfile energy_profile(const HarmonicMap<Coeff>& u, const std::vector<double>& radii,
                             const QuadratureSpec& spec = {}) {
  if (radii.empty()) throw DomainError("energy profile needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0)) throw DomainError("profile radii must lie in ]0, 1]");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("profile radii must be strictly increasing");
  }
  const auto density = grad_norm_sq(u.body);
  auto results = run_indexed(radii.size(), spec.workers, [&](std::size_t i) {
    return integrate_poly_ball(density, radii[i], spec);
  });
  EnergyProfile profile{u.label, u.dimension(), u.degree, {}, spec};
  for (std::size_t i = 0; i < radii.size(); ++i)
    profile.samples.push_back({radii[i], results[i].value, results[i].log_abs_value});
  return profile;
}

struct DecayFit {
  double beta_hat = 0.0;
  double c_hat = 0.0;  // fitted log E at r = 1
  double max_residual = 0.0;
  std::size_t used_samples = 0;
  std::vector<std::string> warnings;
};

/// Least-squares line through (log r, log E). Zero-energy samples are
/// skipped with a warning.
inline DecayFit fit_decay_exponent(const EnergyProfile& profile) {
  DecayFit fit;
  std::vector<std::pair<double, double>> points;
  for (const auto& s : profile.samples) {
    if (s.energy > 0.0) points.emplace_back(std::log(s.r), s.log_energy);
    else fit.warnings.push_back("excluded zero-energy sample at r = " + std::to_string(s.r));
  }
  if (points.empty()) throw ZeroEnergyError("every profile sample is zero; no decay exponent exists");
  if (points.size() < 2) throw DomainError("decay fit needs at least two samples with positive energy");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw DomainError("decay fit needs at least two distinct radii");
  fit.beta_hat = sxy / sxx;
  fit.c_hat = my - fit.beta_hat * mx;
  for (const auto& [x, y] : points)
    fit.max_residual = std::max(fit.max_residual, std::fabs(y - (fit.c_hat + fit.beta_hat * x)));
  fit.used_samples = points.size();
  return fit;
}

struct DecayBoundReport {
  bool holds = true;
  /// min over pairs r < R of (C (r/R)^beta E(R) - E(r)) / E(R); +inf when no
  /// pair has E(R) > 0.
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_r = 0.0;
  double worst_R = 0.0;
  std::size_t pairs_checked = 0;
};

/// Relative slack allowed for rounding when a bound is met with equality.
inline constexpr double decay_bound_rounding = 1e-12;

/// Checks E(r) <= C (r/R)^beta E(R) for every pair r < R of the grid.
inline DecayBoundReport verify_decay_bound(const EnergyProfile& profile, double beta, double C) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (!(C > 0.0)) throw DomainError("C must be positive");
  DecayBoundReport report;
  const auto& s = profile.samples;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      ++report.pairs_checked;
      const double outer = s[j].energy;
      const double bound = C * std::pow(s[i].r / s[j].r, beta) * outer;
      if (outer <= 0.0) {
        if (s[i].energy > 0.0) report.holds = false;
        continue;
      }
      const double margin = (bound - s[i].energy) / outer;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_r = s[i].r;
        report.worst_R = s[j].r;
      }
      if (margin < -decay_bound_rounding) report.holds = false;
    }
  return report;
}

template <class Coeff>
DecayBoundReport verify_decay_bound(const HarmonicMap<Coeff>& u, double beta, double C,
                                    const std::vector<double>& radii, const QuadratureSpec& spec = {}) {
  return verify_decay_bound(energy_profile(u, radii, spec), beta, C);
}

/// (E(1) - E(r)) / E(1): share of the unit-ball energy in the shell r < |x| < 1.
template <class Coeff>
double concentration_fraction(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("concentration radius must lie in ]0, 1[");
  const auto density = grad_norm_sq(u.body);
  const auto whole = integrate_poly_ball(density, 1.0, spec);
  if (whole.value == 0.0) throw ZeroEnergyError(u.label + " has E(1) = 0");
  const auto inner = integrate_poly_ball(density, r, spec);
  if (inner.value <= 0.0) return 1.0;
  return -std::expm1(inner.log_abs_value - whole.log_abs_value);
}

/// theta = E(R/2) / E(R).
template <class Coeff>
double half_radius_theta(const HarmonicMap<Coeff>& u, double R, const QuadratureSpec& spec = {}) {
  if (!(R > 0.0 && R <= 1.0)) throw DomainError("R must lie in ]0, 1]");
  const auto density = grad_norm_sq(u.body);
  const auto outer = integrate_poly_ball(density, R, spec);
  if (outer.value == 0.0) throw ZeroEnergyError(u.label + " has E(R) = 0");
  const auto inner = integrate_poly_ball(density, 0.5 * R, spec);
  if (inner.value == 0.0) return 0.0;
  return std::exp(inner.log_abs_value - outer.log_abs_value);
}

}  // namespace harmonic_ball
