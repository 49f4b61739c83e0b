#pragma once

// Grid experiments with the standard mollifier in dimensions n <= 3:
// mean-value reproduction u = J_delta * u for harmonic u, L^p gradient
// ratios, the scaling of ||grad J_delta||_q and a discrete Young inequality.
//
// J(x) = c exp(-1 / (1 - |x|^2)) on |x| < 1, zero outside, with c chosen so
// that int J = 1. J_delta(x) = delta^-n J(x / delta).

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "harmonics.hpp"
#include "integration.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"

namespace harmonic_ball {

inline constexpr int mollifier_max_dimension = 3;

/// Unnormalised radial bump exp(-1 / (1 - s^2)) for s < 1, else 0.
inline double bump_profile(double s) {
  if (s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

/// d/ds of bump_profile.
inline double bump_profile_derivative(double s) {
  if (s >= 1.0) return 0.0;
  const double one_minus = 1.0 - s * s;
  return bump_profile(s) * (-2.0 * s / (one_minus * one_minus));
}

namespace detail {

inline void check_grid_dimension(int n) {
  if (n < 1 || n > mollifier_max_dimension)
    throw RefusedError("mollifier grids support n <= 3 (got n = " + std::to_string(n) +
                       "); storage grows like h^-n");
}

/// int_0^1 bump(s) s^power ds by adaptive Gauss-Kronrod, tolerance 1e-10.
inline double radial_bump_moment(int power) {
  auto f = [power](double s) { return bump_profile(s) * std::pow(s, power); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-10);
}

}  // namespace detail

struct MollifierSpec {
  int dimension = 2;
  double delta = 0.25;
  double normalization = 0.0;  // c with int c bump(|x|) dx = 1

  /// J_delta at a point of R^n.
  double value(std::span<const double> x) const {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return value_at_radius(std::sqrt(r2));
  }
  double value_at_radius(double radius) const {
    return normalization * std::pow(delta, -dimension) * bump_profile(radius / delta);
  }
  /// |grad J_delta| at distance `radius` from the origin.
  double gradient_norm_at_radius(double radius) const {
    return normalization * std::pow(delta, -dimension - 1) * std::fabs(bump_profile_derivative(radius / delta));
  }
};

inline MollifierSpec make_mollifier(int n, double delta) {
  detail::check_grid_dimension(n);
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("mollifier delta must lie in ]0, 1/2]");
  const double mass = sphere_area(n, 1.0) * detail::radial_bump_moment(n - 1);
  return {n, delta, 1.0 / mass};
}

/// int J_delta(y) |y|^2 dy.
inline double mollifier_second_moment(const MollifierSpec& spec) {
  return spec.delta * spec.delta * spec.normalization * sphere_area(spec.dimension, 1.0) *
         detail::radial_bump_moment(spec.dimension + 1);
}

/// Values on the nodes (i_1 h, ..., i_n h), -N <= i_k <= N. Node coordinates
/// come from integer arithmetic only. Nodes may be marked undefined.
class GridField {
 public:
  GridField(int dimension, double h, int half_extent)
      : dimension_(dimension), h_(h), half_extent_(half_extent) {
    detail::check_grid_dimension(dimension);
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    if (half_extent < 0) throw DomainError("grid extent must be non-negative");
    std::size_t count = 1;
    for (int i = 0; i < dimension; ++i) count *= axis_size();
    values_.assign(count, 0.0);
    defined_.assign(count, 1);
  }

  /// Smallest grid with spacing h covering [-extent, extent]^n.
  static GridField covering(int dimension, double h, double extent = 1.0) {
    return GridField(dimension, h, static_cast<int>(std::ceil(extent / h - 1e-9)));
  }

  int dimension() const noexcept { return dimension_; }
  double spacing() const noexcept { return h_; }
  int half_extent() const noexcept { return half_extent_; }
  std::size_t axis_size() const noexcept { return static_cast<std::size_t>(2 * half_extent_ + 1); }
  std::size_t size() const noexcept { return values_.size(); }

  /// Signed node index (-N..N per axis) to flat position.
  std::size_t flat(std::span<const int> index) const {
    std::size_t f = 0;
    for (int k = 0; k < dimension_; ++k) f = f * axis_size() + static_cast<std::size_t>(index[k] + half_extent_);
    return f;
  }

  std::array<int, 3> index_of(std::size_t flat_index) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = dimension_ - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(flat_index % axis_size()) - half_extent_;
      flat_index /= axis_size();
    }
    return idx;
  }

  std::array<double, 3> coordinates(std::size_t flat_index) const {
    const auto idx = index_of(flat_index);
    return {idx[0] * h_, idx[1] * h_, idx[2] * h_};
  }

  bool contains(std::span<const int> index) const {
    for (int k = 0; k < dimension_; ++k)
      if (index[k] < -half_extent_ || index[k] > half_extent_) return false;
    return true;
  }

  double& value(std::size_t f) { return values_[f]; }
  double value(std::size_t f) const { return values_[f]; }
  bool defined(std::size_t f) const { return defined_[f] != 0; }
  void set_defined(std::size_t f, bool d) { defined_[f] = d ? 1 : 0; }

 private:
  int dimension_;
  double h_;
  int half_extent_;
  std::vector<double> values_;
  std::vector<unsigned char> defined_;
};

/// Samples a polynomial at every node of a grid covering [-extent, extent]^n.
template <class Coeff>
GridField sample_on_grid(const MultiPoly<Coeff>& p, double h, double extent = 1.0) {
  auto field = GridField::covering(static_cast<int>(p.dimension()), h, extent);
  for (std::size_t f = 0; f < field.size(); ++f) {
    const auto x = field.coordinates(f);
    field.value(f) = evaluate(p, std::span<const double>(x.data(), p.dimension()));
  }
  return field;
}

struct MollifierGrid {
  GridField kernel;           // J_delta on nodes within [-delta, delta]^n
  double grid_integral = 0.0; // h^n * sum of kernel values
  double normalization = 0.0;
};

inline MollifierGrid build_mollifier(const MollifierSpec& spec, double h) {
  const int half = static_cast<int>(std::floor(spec.delta / h + 1e-9));
  GridField kernel(spec.dimension, h, half);
  double sum = 0.0;
  for (std::size_t f = 0; f < kernel.size(); ++f) {
    const auto x = kernel.coordinates(f);
    kernel.value(f) = spec.value(std::span<const double>(x.data(), spec.dimension));
    sum += kernel.value(f);
  }
  const double cell = std::pow(h, spec.dimension);
  return {std::move(kernel), sum * cell, spec.normalization};
}

namespace detail {

/// Visits every integer offset in [lo_k, hi_k] per axis (n <= 3).
template <class Visit>
void for_each_index(int n, const std::array<int, 3>& lo, const std::array<int, 3>& hi, Visit visit) {
  std::array<int, 3> idx{0, 0, 0};
  const int i_hi = hi[0];
  const int j_hi = n > 1 ? hi[1] : 0;
  const int k_hi = n > 2 ? hi[2] : 0;
  for (idx[0] = lo[0]; idx[0] <= i_hi; ++idx[0])
    for (idx[1] = n > 1 ? lo[1] : 0; idx[1] <= j_hi; ++idx[1])
      for (idx[2] = n > 2 ? lo[2] : 0; idx[2] <= k_hi; ++idx[2]) visit(idx);
}

}  // namespace detail

/// Discrete convolution h^n sum_y J_delta(x - y) u(y) at an arbitrary point x.
/// Returns nullopt when the delta-ball around x leaves the grid or touches an
/// undefined node.
inline std::optional<double> convolve_at(const GridField& field, const MollifierSpec& spec,
                                         std::span<const double> x) {
  const int n = field.dimension();
  if (static_cast<int>(x.size()) != n || spec.dimension != n) throw DimensionError("point dimension mismatch");
  const double h = field.spacing();
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int k = 0; k < n; ++k) {
    lo[k] = static_cast<int>(std::ceil((x[k] - spec.delta) / h));
    hi[k] = static_cast<int>(std::floor((x[k] + spec.delta) / h));
    if (lo[k] < -field.half_extent() || hi[k] > field.half_extent()) return std::nullopt;
  }
  double sum = 0.0;
  bool ok = true;
  detail::for_each_index(n, lo, hi, [&](const std::array<int, 3>& idx) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = x[k] - idx[k] * h;
      r2 += d * d;
    }
    const double w = spec.value_at_radius(std::sqrt(r2));
    if (w == 0.0) return;
    const std::size_t f = field.flat(std::span<const int>(idx.data(), n));
    if (!field.defined(f)) ok = false;
    sum += w * field.value(f);
  });
  if (!ok) return std::nullopt;
  return sum * std::pow(h, n);
}

/// J_delta * u on every node of `field`; nodes whose delta-neighbourhood
/// leaves the grid are marked undefined rather than extrapolated.
inline GridField mollify(const GridField& field, const MollifierSpec& spec, unsigned workers = 1) {
  if (spec.dimension != field.dimension()) throw DimensionError("mollifier dimension mismatch");
  const auto kernel = build_mollifier(spec, field.spacing());
  const int n = field.dimension();
  const int reach = kernel.kernel.half_extent();
  const double cell = std::pow(field.spacing(), n);
  GridField out(n, field.spacing(), field.half_extent());
  const std::size_t rows = field.axis_size();
  const std::size_t per_row = field.size() / rows;
  auto results = run_indexed(rows, workers, [&](std::size_t row) {
    std::vector<std::pair<double, bool>> vals(per_row);
    for (std::size_t j = 0; j < per_row; ++j) {
      const std::size_t f = row * per_row + j;
      const auto centre = field.index_of(f);
      std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
      bool inside = true;
      for (int k = 0; k < n; ++k) {
        lo[k] = -reach;
        hi[k] = reach;
        if (centre[k] - reach < -field.half_extent() || centre[k] + reach > field.half_extent()) inside = false;
      }
      if (!inside) {
        vals[j] = {0.0, false};
        continue;
      }
      double sum = 0.0;
      bool ok = true;
      detail::for_each_index(n, lo, hi, [&](const std::array<int, 3>& off) {
        const double w = kernel.kernel.value(kernel.kernel.flat(std::span<const int>(off.data(), n)));
        if (w == 0.0) return;
        std::array<int, 3> y{centre[0] - off[0], centre[1] - off[1], centre[2] - off[2]};
        const std::size_t fy = field.flat(std::span<const int>(y.data(), n));
        if (!field.defined(fy)) ok = false;
        sum += w * field.value(fy);
      });
      vals[j] = {sum * cell, ok};
    }
    return vals;
  });
  for (std::size_t row = 0; row < rows; ++row)
    for (std::size_t j = 0; j < per_row; ++j) {
      out.value(row * per_row + j) = results[row][j].first;
      out.set_defined(row * per_row + j, results[row][j].second);
    }
  return out;
}

struct MeanValuePoint {
  std::vector<double> x;
  double u = 0.0;
  double mollified = 0.0;
  double error = 0.0;
};

struct MeanValueReport {
  double max_error = 0.0;
  std::vector<MeanValuePoint> points;
  bool harmonic = true;
  /// Set for uncertified inputs: a nonzero defect is then expected and says
  /// nothing against the mean-value property.
  std::string note;
};

/// sup over `points` of |(J_delta * u)(x) - u(x)| for component `component`
/// of u, with u sampled on the grid of spacing h covering B_1.
template <class Coeff>
MeanValueReport mean_value_check(const HarmonicMap<Coeff>& u, const MollifierSpec& spec, double h,
                                 const std::vector<std::vector<double>>& points, std::size_t component = 0) {
  if (static_cast<int>(u.dimension()) != spec.dimension) throw DimensionError("map dimension must match mollifier");
  const auto poly = [&] {
    if constexpr (CoeffTraits<Coeff>::is_exact) return lower(u.body[component]);
    else return u.body[component];
  }();
  const auto field = sample_on_grid(poly, h, 1.0);
  MeanValueReport report;
  report.harmonic = u.certified;
  if (!u.certified) report.note = "NOT-A-COUNTEREXAMPLE: input is not harmonic";
  for (const auto& x : points) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    if (std::sqrt(r2) > 1.0 - spec.delta + 1e-12) throw DomainError("mean-value points must lie in B_{1-delta}");
    const auto conv = convolve_at(field, spec, x);
    if (!conv) throw DomainError("delta-neighbourhood of a point leaves the sampled grid");
    MeanValuePoint p{x, evaluate(poly, x), *conv, 0.0};
    p.error = std::fabs(p.mollified - p.u);
    report.max_error = std::max(report.max_error, p.error);
    report.points.push_back(std::move(p));
  }
  return report;
}

struct ConvergenceReport {
  double coarse_h = 0.0;
  double coarse_error = 0.0;
  double fine_error = 0.0;
  double order = 0.0;  // log2(coarse_error / fine_error)
};

template <class Coeff>
ConvergenceReport mean_value_convergence(const HarmonicMap<Coeff>& u, const MollifierSpec& spec, double coarse_h,
                                         const std::vector<std::vector<double>>& points) {
  ConvergenceReport c;
  c.coarse_h = coarse_h;
  c.coarse_error = mean_value_check(u, spec, coarse_h, points).max_error;
  c.fine_error = mean_value_check(u, spec, 0.5 * coarse_h, points).max_error;
  c.order = std::log2(c.coarse_error / c.fine_error);
  return c;
}

struct GradientRatio {
  double ratio = 0.0;
  double gradient_norm = 0.0;  // ||grad u||_{L^p(B_{1/2})}
  double l2_norm = 0.0;        // ||u||_{L^2(B_1)}
  bool exact = true;
  double error_estimate = 0.0;  // grid route only: |Q(h) - Q(2h)| in the ratio
};

namespace detail {

template <class Coeff>
double grid_gradient_lp(const VectorPoly<Coeff>& u, double p, double h) {
  const int n = static_cast<int>(u.dimension());
  check_grid_dimension(n);
  const auto g = [&] {
    if constexpr (CoeffTraits<Coeff>::is_exact) return lower(grad_norm_sq(u));
    else return grad_norm_sq(u);
  }();
  const int half = static_cast<int>(std::ceil(0.5 / h));
  std::array<int, 3> lo{-half, -half, -half}, hi{half, half, half};
  double sum = 0.0;
  for_each_index(n, lo, hi, [&](const std::array<int, 3>& idx) {
    std::array<double, 3> x{idx[0] * h, idx[1] * h, idx[2] * h};
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
    if (r2 >= 0.25) return;
    sum += std::pow(std::max(0.0, evaluate(g, std::span<const double>(x.data(), n))), 0.5 * p);
  });
  return std::pow(sum * std::pow(h, n), 1.0 / p);
}

}  // namespace detail

/// ||grad u||_{L^p(B_{1/2})} / ||u||_{L^2(B_1)}. Even integer p uses exact
/// polynomial integration; any other p > 2 uses grid quadrature with spacing
/// h (n <= 3) and reports |Q(h) - Q(2h)| as its error estimate.
template <class Coeff>
GradientRatio gradient_estimate_ratio(const HarmonicMap<Coeff>& u, double p, double h = 1.0 / 256) {
  if (!(p > 2.0)) throw DomainError("gradient estimate needs p > 2");
  MultiPoly<Coeff> u_sq(u.dimension());
  for (const auto& c : u.body.components()) u_sq += c * c;
  const double l2_sq = integrate_poly_ball(u_sq, 1.0).value;
  if (!(l2_sq > 0.0)) throw ZeroEnergyError("u vanishes identically; the ratio is undefined");
  GradientRatio out;
  out.l2_norm = std::sqrt(l2_sq);
  const double rounded = std::round(p);
  if (rounded == p && static_cast<long long>(rounded) % 2 == 0) {
    const auto g = grad_norm_sq(u.body);
    auto power = MultiPoly<Coeff>::constant(u.dimension(), Coeff(1));
    for (long long i = 0; i < static_cast<long long>(rounded) / 2; ++i) power *= g;
    const double integral = integrate_poly_ball(power, 0.5).value;
    out.gradient_norm = std::pow(integral, 1.0 / p);
    out.exact = true;
  } else {
    out.gradient_norm = detail::grid_gradient_lp(u.body, p, h);
    const double coarse = detail::grid_gradient_lp(u.body, p, 2.0 * h);
    out.error_estimate = std::fabs(out.gradient_norm - coarse) / out.l2_norm;
    out.exact = false;
  }
  out.ratio = out.gradient_norm / out.l2_norm;
  return out;
}

struct ScalingFit {
  double exponent = 0.0;           // fitted slope of log ||grad J_delta||_q against log delta
  double expected = 0.0;           // n/q - n - 1
  double max_residual = 0.0;
  std::vector<double> deltas;
  std::vector<double> norms;
};

/// ||grad J_delta||_{L^q} on a grid of spacing h, for q >= 1.
inline double mollifier_gradient_norm(const MollifierSpec& spec, double q, double h) {
  const int n = spec.dimension;
  const int half = static_cast<int>(std::ceil(spec.delta / h));
  std::array<int, 3> lo{-half, -half, -half}, hi{half, half, half};
  double sum = 0.0;
  detail::for_each_index(n, lo, hi, [&](const std::array<int, 3>& idx) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += (idx[k] * h) * (idx[k] * h);
    const double g = spec.gradient_norm_at_radius(std::sqrt(r2));
    if (g > 0.0) sum += std::pow(g, q);
  });
  return std::pow(sum * std::pow(h, n), 1.0 / q);
}

/// Fits log ||grad J_delta||_q against log delta over `deltas` at fixed h.
/// Dimensional analysis predicts the slope n/q - n - 1.
inline ScalingFit mollifier_gradient_scaling(int n, double q, const std::vector<double>& deltas, double h) {
  if (!(q >= 1.0)) throw DomainError("q must be at least 1");
  if (deltas.size() < 2) throw DomainError("scaling fit needs at least two deltas");
  ScalingFit fit;
  fit.expected = n / q - n - 1.0;
  std::vector<std::pair<double, double>> pts;
  for (double d : deltas) {
    const auto spec = make_mollifier(n, d);
    const double norm = mollifier_gradient_norm(spec, q, h);
    fit.deltas.push_back(d);
    fit.norms.push_back(norm);
    pts.emplace_back(std::log(d), std::log(norm));
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  for (const auto& [x, y] : pts) fit.max_residual = std::max(fit.max_residual, std::fabs(y - intercept - fit.exponent * x));
  return fit;
}

struct YoungCheck {
  double lhs = 0.0;  // ||J_delta * u||_{L^p(B_{1/2})} on the grid
  double rhs = 0.0;  // ||J_delta||_{L^q} ||u 1_{B_1}||_{L^2}, 1/q = 1/p + 1/2
  double q = 0.0;
  bool holds = false;
};

/// Discrete Young inequality for the mollifier acting on u restricted to B_1.
template <class Coeff>
YoungCheck young_inequality_check(const HarmonicMap<Coeff>& u, const MollifierSpec& spec, double p, double h,
                                  std::size_t component = 0) {
  if (!(p >= 2.0)) throw DomainError("Young check needs p >= 2");
  const int n = spec.dimension;
  const auto poly = [&] {
    if constexpr (CoeffTraits<Coeff>::is_exact) return lower(u.body[component]);
    else return u.body[component];
  }();
  auto field = sample_on_grid(poly, h, 1.0);
  const double cell = std::pow(h, n);
  double l2 = 0.0;
  for (std::size_t f = 0; f < field.size(); ++f) {
    const auto x = field.coordinates(f);
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
    if (r2 >= 1.0) field.value(f) = 0.0;
    l2 += field.value(f) * field.value(f);
  }
  YoungCheck out;
  out.q = 1.0 / (1.0 / p + 0.5);
  const auto kernel = build_mollifier(spec, h);
  double kq = 0.0;
  for (std::size_t f = 0; f < kernel.kernel.size(); ++f) kq += std::pow(kernel.kernel.value(f), out.q);
  out.rhs = std::pow(kq * cell, 1.0 / out.q) * std::sqrt(l2 * cell);
  double lp = 0.0;
  for (std::size_t f = 0; f < field.size(); ++f) {
    const auto x = field.coordinates(f);
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
    if (r2 >= 0.25) continue;
    const auto conv = convolve_at(field, spec, std::span<const double>(x.data(), n));
    if (conv) lp += std::pow(std::fabs(*conv), p);
  }
  out.lhs = std::pow(lp * cell, 1.0 / p);
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace harmonic_ball
