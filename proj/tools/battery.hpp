#pragma once

// Acceptance battery shared by the acceptance test binary and `harmonic-ball suite`.

#include <harmonic_ball/harmonic_ball.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace harmonic_ball::battery {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds; 0 = no limit
  std::function<Outcome()> run;
};

inline std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline double rel(double got, double want) { return std::fabs(got - want) / std::max(std::fabs(want), 1e-300); }

inline std::vector<std::vector<double>> disk_points(std::size_t count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  while (pts.size() < count) {
    const double a = (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 - 1) * radius;
    const double b = (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 - 1) * radius;
    if (a * a + b * b < radius * radius) pts.push_back({a, b});
  }
  return pts;
}

inline Outcome volume_maximum() {
  const int argmax = volume_argmax(200);
  const double err = rel(unit_ball_volume(5).volume, 8 * std::numbers::pi * std::numbers::pi / 15);
  return {argmax == 5 && err < 1e-12, "argmax n = " + std::to_string(argmax) + ", rel err V5 = " + fmt("%.2e", err)};
}

inline Outcome identity_energy() {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 50; ++n)
    for (double r : {0.3, 0.7, 1.0}) {
      const double want = n * unit_ball_volume(static_cast<int>(n)).volume * std::pow(r, static_cast<double>(n));
      worst = std::max(worst, rel(dirichlet_energy(identity_map(n), r), want));
    }
  return {worst < 1e-12, "max rel err = " + fmt("%.2e", worst) + " over n in [1,50], r in {0.3,0.7,1}"};
}

struct BatteryOptions {
  std::uint64_t seed = 7;          // random harmonic maps and sample points
  std::uint64_t mc_seed = 20240601;  // MC agreement
  unsigned workers = 1;
};

class Battery {
 public:
  explicit Battery(BatteryOptions opt) : opt_(opt) {}

  std::vector<Criterion> criteria();

 private:
  IdentitySuiteOptions suite_options(int n_min, int n_max) const {
    IdentitySuiteOptions s;
    s.n_min = n_min;
    s.n_max = n_max;
    s.seed = opt_.seed;
    s.workers = opt_.workers;
    return s;
  }
  std::vector<HarmonicMap<Rational>> suite_maps(int n_min, int n_max) const {
    return identity_suite_maps(suite_options(n_min, n_max));
  }
  const std::vector<ResidualReport>& identity_reports() {
    if (reports_.empty()) reports_ = run_identity_suite(suite_options(2, 10));
    return reports_;
  }

  Outcome identity_residuals(IdentityName which);
  Outcome decay_law();
  Outcome dyadic_contraction();
  Outcome minimiser_bound();
  Outcome mean_value();
  Outcome mc_agreement();

  BatteryOptions opt_;
  std::vector<ResidualReport> reports_;
};

inline Outcome Battery::identity_residuals(IdentityName which) {
  double worst = 0.0;
  std::size_t count = 0;
  std::string worst_label;
  for (const auto& r : identity_reports()) {
    if (r.identity != which) continue;
    ++count;
    if (r.normalized_residual >= worst) {
      worst = r.normalized_residual;
      worst_label = r.map_label + " r=" + fmt("%g", r.r);
    }
  }
  return {count > 0 && worst < 1e-10,
          std::to_string(count) + " reports, max normalized residual = " + fmt("%.2e", worst) + " (" + worst_label + ")"};
}

inline Outcome Battery::decay_law() {
  double worst_fit = 0.0;
  for (std::size_t n = 2; n <= 10; ++n)
    for (unsigned k = 1; k <= 5; ++k) {
      const auto fit = fit_decay_exponent(energy_profile(zonal_solid_harmonic(n, k), dyadic_radii(8)));
      worst_fit = std::max(worst_fit, std::fabs(fit.beta_hat - static_cast<double>(n + 2 * k - 2)));
    }
  std::size_t checked = 0, failed = 0;
  for (const auto& u : suite_maps(2, 10)) {
    if (!u.degree || *u.degree < 1 || u.is_constant()) continue;
    const double n = static_cast<double>(u.dimension());
    const auto profile = energy_profile(u, dyadic_radii(8));
    for (double beta : {0.5, n / 2, n - 1.0, n - 0.5, n - 0.1}) {
      if (!(beta > 0.0)) continue;
      ++checked;
      if (!verify_decay_bound(profile, beta, 1.0).holds) ++failed;
    }
  }
  return {worst_fit < 1e-9 && failed == 0,
          "max |beta_hat - (n+2k-2)| = " + fmt("%.2e", worst_fit) + "; decay bound C=1 failed " +
              std::to_string(failed) + "/" + std::to_string(checked)};
}

inline Outcome Battery::dyadic_contraction() {
  double worst = 0.0;
  double max_theta = 0.0;
  for (const auto& u : suite_maps(2, 10)) {
    if (u.is_constant()) continue;
    const double theta = half_radius_theta(u, 1.0);
    max_theta = std::max(max_theta, theta);
    if (!u.degree) continue;
    const int e = static_cast<int>(u.dimension()) + 2 * static_cast<int>(*u.degree) - 2;
    worst = std::max(worst, rel(theta, std::ldexp(1.0, -e)));
  }
  return {worst < 1e-12 && max_theta < 1.0,
          "max rel err vs 2^-(n+2k-2) = " + fmt("%.2e", worst) + ", max theta = " + fmt("%.6g", max_theta)};
}

inline Outcome boundary_concentration() {
  double worst = 0.0;
  bool increasing = true;
  bool threshold = true;
  double previous = -1.0;
  for (std::size_t n = 2; n <= 200; ++n) {
    const double f = concentration_fraction(identity_map(n), 0.9);
    worst = std::max(worst, std::fabs(f - (1 - std::pow(0.9, static_cast<double>(n)))));
    if (!(f > previous)) increasing = false;
    if (n >= 88 && !(f > 1 - 1e-4)) threshold = false;
    previous = f;
  }
  return {worst < 1e-12 && increasing && threshold,
          "max |f - (1-0.9^n)| = " + fmt("%.2e", worst) + ", strictly increasing: " + (increasing ? "yes" : "no") +
              ", > 1-1e-4 for n >= 88: " + (threshold ? "yes" : "no")};
}

inline Outcome Battery::minimiser_bound() {
  double worst = 0.0;
  for (std::size_t n = 3; n <= 50; ++n)
    worst = std::max(worst, rel(minimiser_bound_check(identity_map(n)).margin_ratio, 2.0 * (n - 1.0) / (n - 2.0)));
  double min_ratio = INFINITY;
  std::size_t members = 0;
  for (const auto& u : suite_maps(3, 10)) {
    if (u.is_constant()) continue;
    ++members;
    min_ratio = std::min(min_ratio, minimiser_bound_check(u).margin_ratio);
  }
  return {worst < 1e-12 && min_ratio > 1.0,
          "identity max rel err = " + fmt("%.2e", worst) + "; min ratio over " + std::to_string(members) +
              " suite members = " + fmt("%.6g", min_ratio)};
}

inline Outcome c1_constant() {
  bool monotone = true;
  int first_violation = 0;
  double previous = INFINITY;
  double at_violation = 0.0;
  for (std::size_t n = 3; n <= 200; ++n) {
    const double c1n = c1_bound_report(identity_map(n)).c1 * static_cast<double>(n);
    if (!(c1n < previous && c1n > 2.0)) monotone = false;
    if (n >= 22 && !(std::fabs(c1n - 2.0) < 0.2) && first_violation == 0) {
      first_violation = static_cast<int>(n);
      at_violation = std::fabs(c1n - 2.0);
    }
    previous = c1n;
  }
  std::string detail = std::string("c1*n decreasing to 2: ") + (monotone ? "yes" : "no") + ", c1*n(200) = " +
                       fmt("%.6g", previous);
  if (first_violation)
    detail += "; |c1*n - 2| = " + fmt("%.17g", at_violation) + " at n = " + std::to_string(first_violation) +
              " (4/(n-2) = 0.2 exactly at n = 22)";
  return {monotone && first_violation == 0, detail};
}

inline Outcome Battery::mean_value() {
  const auto spec = make_mollifier(2, 0.25);
  const auto pts = disk_points(20, 0.5, opt_.seed);
  std::vector<HarmonicMap<Rational>> harmonic;
  harmonic.push_back(identity_map(2));
  for (unsigned k = 0; k <= 5; ++k) harmonic.push_back(zonal_solid_harmonic(2, k));
  for (unsigned k = 0; k <= 4; ++k) harmonic.push_back(random_harmonic_polynomial(2, k, opt_.seed));
  double sup = 0.0;
  double min_order = INFINITY;
  for (const auto& u : harmonic) {
    for (std::size_t c = 0; c < u.body.arity(); ++c)
      sup = std::max(sup, mean_value_check(u, spec, 1.0 / 256, pts, c).max_error);
    if (u.degree && *u.degree >= 2 && !u.body[0].is_zero())
      min_order = std::min(min_order, mean_value_convergence(u, spec, 1.0 / 16, pts).order);
  }
  const auto bowl = make_harmonic_map(VectorPoly<Rational>::scalar(MultiPoly<Rational>::norm_squared(2)), "|x|^2");
  double min_defect = INFINITY;
  for (double h : {1.0 / 64, 1.0 / 128, 1.0 / 256})
    min_defect = std::min(min_defect, mean_value_check(bowl, spec, h, pts).max_error);
  return {sup < 1e-4 && min_order >= 1.8 && min_defect > 1e-3,
          "sup error (h=1/256) = " + fmt("%.2e", sup) + ", min order (h=1/16 -> 1/32) = " + fmt("%.3g", min_order) +
              ", |x|^2 defect >= " + fmt("%.6g", min_defect)};
}

inline Outcome Battery::mc_agreement() {
  std::string detail;
  bool pass = true;
  const std::uint64_t seed = opt_.mc_seed;
  for (std::size_t n : {2u, 5u, 10u}) {
    ShardStream picks(seed, n);
    int agree = 0;
    for (int i = 0; i < 10; ++i) {
      MultiIndex alpha(n);
      const unsigned pairs = static_cast<unsigned>(picks.next_bits() % 5);
      for (unsigned j = 0; j < pairs; ++j) {
        const std::size_t a = picks.next_bits() % n;
        alpha.set(a, alpha[a] + 2);
      }
      const double exact = sphere_monomial_integral(static_cast<int>(n), alpha, 1.0).value;
      const auto mc = integrate_poly_sphere(MultiPoly<Rational>::monomial(alpha), 1.0,
                                            QuadratureSpec::monte_carlo(1000000, seed + 100 * n + i, opt_.workers));
      // alpha = 0 has zero variance; allow rounding on top of 3 sigma
      if (std::fabs(mc.value - exact) <= 3 * mc.standard_error + 1e-12 * std::fabs(exact)) ++agree;
    }
    if (agree < 9) pass = false;
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + std::to_string(agree) + "/10";
  }
  return {pass, detail + " within 3 sigma"};
}

inline Outcome mollifier_scaling() {
  bool pass = true;
  std::string detail;
  for (int n : {2, 3})
    for (double q : {1.0, 1.5, 2.0}) {
      const auto fit = mollifier_gradient_scaling(n, q, {0.125, 0.25, 0.5}, n == 2 ? 1.0 / 256 : 1.0 / 96);
      const double gap = std::fabs(fit.exponent - fit.expected);
      if (!(gap < 0.05)) pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " q=" + fmt("%g", q) + ": " +
                fmt("%.4f", fit.exponent) + " vs " + fmt("%.4g", fit.expected);
    }
  return {pass, detail + " (a delta^-1 scaling holds for q = 1 only)"};
}

inline Outcome scope_statement() {
  return {true, "not reproducible at desk scale: arbitrary weakly harmonic sequences, universality of C3, "
                "distributional solutions; covered by the polynomial-family property suites instead"};
}

inline std::vector<Criterion> Battery::criteria() {
  return {
      {1, "volume maximum", 1.0, volume_maximum},
      {2, "identity-map energy", 1.0, identity_energy},
      {3, "Pohozaev identity", 30.0, [this] { return identity_residuals(IdentityName::pohozaev); }},
      {4, "Green identity", 30.0, [this] { return identity_residuals(IdentityName::green); }},
      {5, "decay law", 0.0, [this] { return decay_law(); }},
      {6, "dyadic contraction", 0.0, [this] { return dyadic_contraction(); }},
      {7, "boundary concentration", 0.0, boundary_concentration},
      {8, "minimiser bound", 0.0, [this] { return minimiser_bound(); }},
      {9, "O(1/n) constant", 0.0, c1_constant},
      {10, "mean-value property", 120.0, [this] { return mean_value(); }},
      {11, "MC oracle agreement", 60.0, [this] { return mc_agreement(); }},
      {12, "mollifier scaling exponent", 0.0, mollifier_scaling},
      {13, "desk-scale scope", 0.0, scope_statement},
  };
}

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every criterion in order; `on_result` sees each result as it lands.
template <class OnResult>
std::vector<CriterionResult> run_battery(const BatteryOptions& opt, OnResult on_result) {
  Battery battery(opt);
  std::vector<CriterionResult> results;
  for (const auto& c : battery.criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds >= c.time_limit) {
      out.pass = false;
      out.detail += "; runtime over " + fmt("%g", c.time_limit) + " s";
    }
    results.push_back({c.id, c.title, out.pass, out.detail, seconds});
    on_result(results.back());
  }
  return results;
}
}  // namespace harmonic_ball::battery
