#pragma once

// Volumes of Euclidean unit balls, sphere areas and thin-shell fractions.
// Everything that can leave double range for large n is carried in log space;
// the linear-space fields are best effort.

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "special_functions.hpp"

namespace harmonic_ball {

struct BallVolume {
  int dimension = 0;
  double log_volume = 0.0;  // authoritative
  double volume = 1.0;      // exp(log_volume); underflows to 0 for very large n
};

/// ln Vol(B^n) = (n/2) ln pi - ln Gamma(n/2 + 1). n = 0 gives the degenerate value 1.
inline double log_unit_ball_volume(int n) {
  if (n < 0) throw DomainError("dimension must be non-negative");
  if (n == 0) return 0.0;
  return 0.5 * n * std::log(std::numbers::pi) - log_gamma(0.5 * n + 1.0);
}

inline BallVolume unit_ball_volume(int n) {
  const double lv = log_unit_ball_volume(n);
  return {n, lv, std::exp(lv)};
}

/// Dimension in [1, n_max] with the largest unit-ball volume; smallest n on ties.
inline int volume_argmax(int n_max) {
  if (n_max < 1) throw DomainError("n_max must be positive");
  int best = 1;
  double best_log = log_unit_ball_volume(1);
  for (int n = 2; n <= n_max; ++n) {
    const double lv = log_unit_ball_volume(n);
    if (lv > best_log) {
      best = n;
      best_log = lv;
    }
  }
  return best;
}

/// Shell {r < |x| < 1} inside the unit ball of R^n.
struct ShellSpec {
  int dimension = 1;
  double inner_radius = 0.0;
};

/// Fraction of Vol(B^n) lying in the shell: 1 - r^n.
inline double shell_volume_fraction(const ShellSpec& s) {
  if (!(s.inner_radius >= 0.0 && s.inner_radius <= 1.0)) throw DomainError("shell radius must lie in [0, 1]");
  if (s.dimension < 1) throw DomainError("dimension must be positive");
  if (s.inner_radius == 0.0) return 1.0;
  return -std::expm1(s.dimension * std::log(s.inner_radius));
}

/// Width w of the outer shell {1 - w < |x| < 1} holding `mass` of the volume:
/// w = 1 - (1 - mass)^(1/n).
inline double shell_width_for_mass(int n, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("mass must lie in ]0, 1[");
  if (n < 1) throw DomainError("dimension must be positive");
  return -std::expm1(std::log1p(-mass) / n);
}

/// ln |dB_r^n| = ln(n V_n) + (n-1) ln r.
inline double log_sphere_area(int n, double r) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  if (n < 1) throw DomainError("dimension must be positive");
  return std::log(static_cast<double>(n)) + log_unit_ball_volume(n) + (n - 1) * std::log(r);
}

inline double sphere_area(int n, double r) { return std::exp(log_sphere_area(n, r)); }

}  // namespace harmonic_ball
