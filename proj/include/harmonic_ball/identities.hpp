#pragma once

// Residual checks for the first-variation identities of Dirichlet
// minimisers on B_r:
//
//   inner variation (Pohozaev):
//     (n - 2) int_{B_r} |grad u|^2 = r int_{dB_r} |grad u|^2 - 2 r int_{dB_r} |d_nu u|^2
//   outer variation (Green):
//     int_{B_r} |grad u|^2 = sum_i int_{dB_r} u^i d_nu u^i
//
// and the minimiser bound E(1) < 2/(n-2) H(1) for non-constant u, n >= 3.

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "energetics.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "harmonics.hpp"
#include "integration.hpp"
#include "parallel.hpp"

namespace harmonic_ball {

enum class IdentityName { pohozaev, green, minimiser_bound, c1_bound };

inline std::string to_string(IdentityName id) {
  switch (id) {
    case IdentityName::pohozaev: return "pohozaev";
    case IdentityName::green: return "green";
    case IdentityName::minimiser_bound: return "minimiser_bound";
    case IdentityName::c1_bound: return "c1_bound";
  }
  return "unknown";
}

struct ResidualReport {
  IdentityName identity = IdentityName::pohozaev;
  std::string map_label;
  std::size_t n = 0;
  double r = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;             // lhs - rhs
  double normalized_residual = 0.0;  // |residual| / max(|lhs|, |rhs|, E(r)); 0 when all vanish
  double energy = 0.0;               // E(r)
  double margin_ratio = 0.0;         // rhs / lhs (bound checks only)
  double c1 = 0.0;                   // 2 / (n - 2) (bound checks only)
  bool holds = true;                 // bound checks: the strict inequality holds
};

namespace detail {

inline ResidualReport finish_report(IdentityName id, const std::string& label, std::size_t n, double r,
                                    double lhs, double rhs, double energy) {
  ResidualReport rep;
  rep.identity = id;
  rep.map_label = label;
  rep.n = n;
  rep.r = r;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = lhs - rhs;
  rep.energy = energy;
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), std::fabs(energy)});
  rep.normalized_residual = scale > 0.0 ? std::fabs(rep.residual) / scale : 0.0;
  return rep;
}

template <class Coeff>
void require_certified(const HarmonicMap<Coeff>& u, const char* identity) {
  if (!u.certified)
    throw RefusedError(std::string(identity) + " identity presumes a harmonic map; " + u.label +
                       " is not certified harmonic");
}

inline void require_radius(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("identity radius must lie in ]0, 1]");
}

}  // namespace detail

template <class Coeff>
ResidualReport pohozaev_residual(const HarmonicMap<Coeff>& u, const EnergyDensities<Coeff>& dens, double r,
                                 const QuadratureSpec& spec = {}) {
  detail::require_certified(u, "Pohozaev");
  detail::require_radius(r);
  const double n = static_cast<double>(u.dimension());
  const double energy = integrate_poly_ball(dens.grad_sq, r, spec).value;
  const double total = integrate_poly_sphere(dens.grad_sq, r, spec).value;
  const double normal = integrate_poly_sphere(dens.radial, r, spec).value / (r * r);
  return detail::finish_report(IdentityName::pohozaev, u.label, u.dimension(), r, (n - 2.0) * energy,
                               r * total - 2.0 * r * normal, energy);
}

template <class Coeff>
ResidualReport pohozaev_residual(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  detail::require_certified(u, "Pohozaev");
  return pohozaev_residual(u, EnergyDensities<Coeff>::of(u.body), r, spec);
}

template <class Coeff>
ResidualReport green_residual(const HarmonicMap<Coeff>& u, const EnergyDensities<Coeff>& dens, double r,
                              const QuadratureSpec& spec = {}) {
  detail::require_certified(u, "Green");
  detail::require_radius(r);
  const double energy = integrate_poly_ball(dens.grad_sq, r, spec).value;
  const double flux = integrate_poly_sphere(dens.flux, r, spec).value / r;
  return detail::finish_report(IdentityName::green, u.label, u.dimension(), r, energy, flux, energy);
}

template <class Coeff>
ResidualReport green_residual(const HarmonicMap<Coeff>& u, double r, const QuadratureSpec& spec = {}) {
  detail::require_certified(u, "Green");
  return green_residual(u, EnergyDensities<Coeff>::of(u.body), r, spec);
}

namespace detail {

template <class Coeff>
ResidualReport bound_report(IdentityName id, const HarmonicMap<Coeff>& u, const QuadratureSpec& spec) {
  const std::size_t n = u.dimension();
  if (n < 3) throw RefusedError("the minimiser bound needs n >= 3 (got n = " + std::to_string(n) + ")");
  if (u.is_constant()) throw RefusedError("the minimiser bound excludes constant maps");
  const double c1 = 2.0 / (static_cast<double>(n) - 2.0);
  const double energy = dirichlet_energy(u, 1.0, spec);
  const double h = surface_dirichlet(u, 1.0, spec);
  auto rep = finish_report(id, u.label, n, 1.0, energy, c1 * h, energy);
  rep.c1 = c1;
  rep.margin_ratio = energy > 0.0 ? rep.rhs / energy : std::numeric_limits<double>::infinity();
  rep.holds = rep.lhs < rep.rhs;
  return rep;
}

}  // namespace detail

/// E(1) against 2/(n-2) H(1); `margin_ratio` = rhs / lhs must exceed 1.
template <class Coeff>
ResidualReport minimiser_bound_check(const HarmonicMap<Coeff>& u, const QuadratureSpec& spec = {}) {
  return detail::bound_report(IdentityName::minimiser_bound, u, spec);
}

/// The same bound read as E(1) <= c1 H(1) with c1 = 2/(n-2) = O(1/n).
template <class Coeff>
ResidualReport c1_bound_report(const HarmonicMap<Coeff>& u, const QuadratureSpec& spec = {}) {
  return detail::bound_report(IdentityName::c1_bound, u, spec);
}

struct VolumeChainRow {
  int n = 0;
  double volume = 0.0;
  double log_volume = 0.0;
  double energy = 0.0;              // E(1) = n V_n for the identity map
  double surface_dirichlet = 0.0;   // H(1) = n (n - 1) V_n
  double implied_bound = 0.0;       // 2 H(1) / (n (n - 2)) >= V_n
  double running_sup_h = 0.0;       // sup_{3 <= m <= n} H_m(1)
};

struct VolumeChain {
  std::vector<VolumeChainRow> rows;
  int argmax_h = 0;  // n attaining sup H(1) over the range
  double sup_h = 0.0;
  /// The volume bound V_n <= 2 sup H / (n (n - 2)) = O(1/n^2) needs sup H
  /// finite; true when the supremum is attained strictly inside the range.
  bool sup_attained_inside = false;
};

/// Identity-map chain E(1) = n V_n, H(1) = n (n-1) V_n, V_n <= 2 H(1) / (n (n-2))
/// over n in [n_lo, n_hi], all in log space.
inline VolumeChain volume_decay_chain(int n_lo, int n_hi) {
  if (n_lo < 3 || n_hi < n_lo) throw DomainError("volume chain needs 3 <= n_lo <= n_hi");
  VolumeChain chain;
  double best_log_h = -std::numeric_limits<double>::infinity();
  for (int n = n_lo; n <= n_hi; ++n) {
    const double lv = log_unit_ball_volume(n);
    const double log_e = std::log(static_cast<double>(n)) + lv;
    const double log_h = log_e + std::log(n - 1.0);
    if (log_h > best_log_h) {
      best_log_h = log_h;
      chain.argmax_h = n;
    }
    VolumeChainRow row;
    row.n = n;
    row.log_volume = lv;
    row.volume = std::exp(lv);
    row.energy = std::exp(log_e);
    row.surface_dirichlet = std::exp(log_h);
    row.implied_bound = std::exp(std::log(2.0) + log_h - std::log(static_cast<double>(n)) - std::log(n - 2.0));
    row.running_sup_h = std::exp(best_log_h);
    chain.rows.push_back(row);
  }
  chain.sup_h = std::exp(best_log_h);
  chain.sup_attained_inside = chain.argmax_h < n_hi;
  return chain;
}

/// Ordering used for suite reports: identity, map label, n, r.
inline bool report_less(const ResidualReport& a, const ResidualReport& b) {
  return std::tie(a.identity, a.map_label, a.n, a.r) < std::tie(b.identity, b.map_label, b.n, b.r);
}

struct IdentitySuiteOptions {
  int n_min = 2;
  int n_max = 10;
  unsigned zonal_max_degree = 5;
  unsigned random_max_degree = 4;
  std::uint64_t seed = 7;
  std::vector<double> radii{0.3, 0.7, 1.0};
  unsigned workers = 1;
};

/// The default identity test family: identity map, zonal harmonics and
/// random harmonic polynomials for every n in range.
inline std::vector<HarmonicMap<Rational>> identity_suite_maps(const IdentitySuiteOptions& opt) {
  std::vector<HarmonicMap<Rational>> maps;
  for (int n = opt.n_min; n <= opt.n_max; ++n) {
    maps.push_back(identity_map(n));
    for (unsigned k = 0; k <= opt.zonal_max_degree; ++k) maps.push_back(zonal_solid_harmonic(n, k));
    for (unsigned k = 0; k <= opt.random_max_degree; ++k) maps.push_back(random_harmonic_polynomial(n, k, opt.seed));
  }
  return maps;
}

/// Pohozaev and Green residuals over maps x radii, sorted by report_less.
inline std::vector<ResidualReport> run_identity_suite(const IdentitySuiteOptions& opt) {
  const auto maps = identity_suite_maps(opt);
  auto per_map = run_indexed(maps.size(), opt.workers, [&](std::size_t i) {
    std::vector<ResidualReport> out;
    const auto dens = EnergyDensities<Rational>::of(maps[i].body);
    for (double r : opt.radii) {
      out.push_back(pohozaev_residual(maps[i], dens, r));
      out.push_back(green_residual(maps[i], dens, r));
    }
    return out;
  });
  std::vector<ResidualReport> reports;
  for (auto& v : per_map) reports.insert(reports.end(), v.begin(), v.end());
  std::stable_sort(reports.begin(), reports.end(), report_less);
  return reports;
}

}  // namespace harmonic_ball
