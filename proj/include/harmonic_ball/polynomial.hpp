#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "multi_index.hpp"

namespace harmonic_ball {

/// Sparse multivariate polynomial in n variables with coefficients in Coeff.
///
/// Terms are kept in graded lexicographic order and no zero coefficient is
/// ever stored, so two polynomials are equal iff their term maps are equal.
/// For floating coefficients, terms below 1e-14 of the largest coefficient
/// are pruned after every arithmetic operation.
template <class Coeff>
class MultiPoly {
 public:
  using coefficient_type = Coeff;
  using traits = CoeffTraits<Coeff>;
  using term_map = std::map<MultiIndex, Coeff, GradedLexLess>;

  explicit MultiPoly(std::size_t dimension = 0) : dimension_(dimension) {}

  static MultiPoly constant(std::size_t dimension, const Coeff& c) {
    MultiPoly p(dimension);
    p.add_term(MultiIndex(dimension), c);
    return p;
  }

  /// The coordinate function x_{axis+1}.
  static MultiPoly variable(std::size_t dimension, std::size_t axis) {
    if (axis >= dimension) throw DimensionError("variable axis out of range");
    MultiPoly p(dimension);
    p.add_term(MultiIndex::unit(dimension, axis), Coeff(1));
    return p;
  }

  static MultiPoly monomial(const MultiIndex& alpha, const Coeff& c = Coeff(1)) {
    MultiPoly p(alpha.dimension());
    p.add_term(alpha, c);
    return p;
  }

  /// |x|^2 = x1^2 + ... + xn^2.
  static MultiPoly norm_squared(std::size_t dimension) {
    MultiPoly p(dimension);
    for (std::size_t i = 0; i < dimension; ++i) p.add_term(MultiIndex::unit(dimension, i, 2), Coeff(1));
    return p;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  const term_map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total_degree() == 0);
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.total_degree());
  }

  bool is_homogeneous(unsigned k) const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [k](const auto& t) { return t.first.total_degree() == k; });
  }

  Coeff coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  /// Adds c * x^alpha, dropping the term if it cancels.
  void add_term(const MultiIndex& alpha, const Coeff& c) {
    if (alpha.dimension() != dimension_) throw DimensionError("term dimension does not match polynomial");
    if (traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_same_dimension(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
    normalize();
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& o) {
    check_same_dimension(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
    normalize();
    return *this;
  }

  MultiPoly& operator*=(const Coeff& s) {
    if (traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [alpha, c] : terms_) c *= s;
    normalize();
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Coeff& s) { return a *= s; }
  friend MultiPoly operator*(const Coeff& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Coeff(-1); }

  /// Product: all pairwise terms are collected, sorted and merged, which is
  /// much cheaper than inserting each pair into the term map.
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_dimension(b);
    std::vector<std::pair<MultiIndex, Coeff>> pairs;
    pairs.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) pairs.emplace_back(ea + eb, ca * cb);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& x, const auto& y) { return GradedLexLess{}(x.first, y.first); });
    MultiPoly r(a.dimension_);
    auto hint = r.terms_.end();
    for (std::size_t i = 0; i < pairs.size();) {
      std::size_t j = i + 1;
      Coeff sum = std::move(pairs[i].second);
      while (j < pairs.size() && pairs[j].first == pairs[i].first) sum += pairs[j++].second;
      if (!traits::is_zero(sum)) hint = r.terms_.emplace_hint(hint, std::move(pairs[i].first), std::move(sum));
      i = j;
    }
    r.normalize();
    return r;
  }

  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.dimension_ == b.dimension_ && a.terms_ == b.terms_;
  }

 private:
  void check_same_dimension(const MultiPoly& o) const {
    if (o.dimension_ != dimension_) throw DimensionError("polynomial dimension mismatch");
  }

  void normalize() {
    if constexpr (!traits::is_exact) {
      double largest = 0.0;
      for (const auto& [alpha, c] : terms_) largest = std::max(largest, traits::magnitude(c));
      const double floor = largest * traits::relative_prune;
      std::erase_if(terms_, [floor](const auto& t) { return traits::magnitude(t.second) <= floor; });
    }
  }

  std::size_t dimension_;
  term_map terms_;
};

/// An m-tuple of polynomials on R^n: a polynomial map R^n -> R^m.
template <class Coeff>
class VectorPoly {
 public:
  using coefficient_type = Coeff;

  explicit VectorPoly(std::size_t dimension = 0) : dimension_(dimension) {}
  VectorPoly(std::size_t dimension, std::vector<MultiPoly<Coeff>> components)
      : dimension_(dimension), components_(std::move(components)) {
    for (const auto& c : components_)
      if (c.dimension() != dimension_) throw DimensionError("vector component dimension mismatch");
  }

  static VectorPoly scalar(MultiPoly<Coeff> p) {
    const std::size_t n = p.dimension();
    return VectorPoly(n, {std::move(p)});
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t arity() const noexcept { return components_.size(); }
  const MultiPoly<Coeff>& operator[](std::size_t i) const { return components_.at(i); }
  const std::vector<MultiPoly<Coeff>>& components() const noexcept { return components_; }

  void push_back(MultiPoly<Coeff> p) {
    if (p.dimension() != dimension_) throw DimensionError("vector component dimension mismatch");
    components_.push_back(std::move(p));
  }

  bool is_constant() const {
    return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_constant(); });
  }

  VectorPoly scaled(const Coeff& s) const {
    VectorPoly r(dimension_);
    for (const auto& c : components_) r.push_back(c * s);
    return r;
  }

  friend VectorPoly operator+(const VectorPoly& a, const VectorPoly& b) {
    if (a.dimension_ != b.dimension_ || a.arity() != b.arity()) throw DimensionError("vector shape mismatch");
    VectorPoly r(a.dimension_);
    for (std::size_t i = 0; i < a.arity(); ++i) r.push_back(a[i] + b[i]);
    return r;
  }

  friend bool operator==(const VectorPoly& a, const VectorPoly& b) = default;

 private:
  std::size_t dimension_;
  std::vector<MultiPoly<Coeff>> components_;
};

template <class Coeff>
MultiPoly<Coeff> partial_derivative(const MultiPoly<Coeff>& p, std::size_t axis) {
  if (axis >= p.dimension()) throw DimensionError("derivative axis out of range");
  MultiPoly<Coeff> r(p.dimension());
  for (const auto& [alpha, c] : p.terms()) {
    const unsigned e = alpha[axis];
    if (e == 0) continue;
    MultiIndex lowered = alpha;
    lowered.set(axis, e - 1);
    r.add_term(lowered, c * Coeff(static_cast<int>(e)));
  }
  return r;
}

template <class Coeff>
std::vector<MultiPoly<Coeff>> gradient(const MultiPoly<Coeff>& p) {
  std::vector<MultiPoly<Coeff>> g;
  g.reserve(p.dimension());
  for (std::size_t j = 0; j < p.dimension(); ++j) g.push_back(partial_derivative(p, j));
  return g;
}

/// Sum of unmixed second partials, computed term by term.
template <class Coeff>
MultiPoly<Coeff> laplacian(const MultiPoly<Coeff>& p) {
  MultiPoly<Coeff> r(p.dimension());
  for (const auto& [alpha, c] : p.terms()) {
    for (std::size_t j = 0; j < p.dimension(); ++j) {
      const unsigned e = alpha[j];
      if (e < 2) continue;
      MultiIndex lowered = alpha;
      lowered.set(j, e - 2);
      r.add_term(lowered, c * Coeff(static_cast<int>(e * (e - 1))));
    }
  }
  return r * Coeff(1);  // normalize floating output
}

/// Exact test for rational coefficients; for floating coefficients every
/// coefficient of the Laplacian must be below `tolerance` (default 1e-12).
template <class Coeff>
bool is_harmonic(const MultiPoly<Coeff>& p, double tolerance = 1e-12) {
  const auto lap = laplacian(p);
  if constexpr (CoeffTraits<Coeff>::is_exact) {
    (void)tolerance;
    return lap.is_zero();
  } else {
    return std::all_of(lap.terms().begin(), lap.terms().end(),
                       [tolerance](const auto& t) { return std::fabs(t.second) < tolerance; });
  }
}

template <class Coeff>
bool is_harmonic(const VectorPoly<Coeff>& u, double tolerance = 1e-12) {
  return std::all_of(u.components().begin(), u.components().end(),
                     [tolerance](const auto& c) { return is_harmonic(c, tolerance); });
}

/// Euler operator <x, grad p>. For p homogeneous of degree k this is k*p.
template <class Coeff>
MultiPoly<Coeff> radial_derivative(const MultiPoly<Coeff>& p) {
  MultiPoly<Coeff> r(p.dimension());
  for (const auto& [alpha, c] : p.terms()) r.add_term(alpha, c * Coeff(static_cast<int>(alpha.total_degree())));
  return r * Coeff(1);
}

/// |grad u|^2 = sum_{i,j} (d u^i / d x_j)^2.
template <class Coeff>
MultiPoly<Coeff> grad_norm_sq(const VectorPoly<Coeff>& u) {
  MultiPoly<Coeff> r(u.dimension());
  for (const auto& comp : u.components())
    for (std::size_t j = 0; j < u.dimension(); ++j) {
      const auto d = partial_derivative(comp, j);
      if (!d.is_zero()) r += d * d;
    }
  return r;
}

template <class Coeff>
MultiPoly<Coeff> grad_norm_sq(const MultiPoly<Coeff>& p) {
  return grad_norm_sq(VectorPoly<Coeff>::scalar(p));
}

/// Evaluates p at `point` in double precision. Terms are accumulated in
/// ascending graded lexicographic order, so the result is deterministic.
template <class Coeff>
double evaluate(const MultiPoly<Coeff>& p, std::span<const double> point) {
  if (point.size() != p.dimension()) throw DimensionError("evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double term = CoeffTraits<Coeff>::to_double(c);
    for (std::size_t i = 0; i < alpha.dimension(); ++i)
      for (unsigned e = 0; e < alpha[i]; ++e) term *= point[i];
    sum += term;
  }
  return sum;
}

template <class Coeff>
double evaluate(const MultiPoly<Coeff>& p, std::initializer_list<double> point) {
  return evaluate(p, std::span<const double>(point.begin(), point.size()));
}

/// Substitutes x_i := substitutions[i]; the result lives in the
/// substitutions' dimension.
template <class Coeff>
MultiPoly<Coeff> compose(const MultiPoly<Coeff>& p, const VectorPoly<Coeff>& substitutions) {
  if (substitutions.arity() != p.dimension()) throw DimensionError("composition arity mismatch");
  const std::size_t m = substitutions.dimension();
  std::vector<std::vector<MultiPoly<Coeff>>> powers(p.dimension());
  for (std::size_t i = 0; i < p.dimension(); ++i) powers[i].push_back(MultiPoly<Coeff>::constant(m, Coeff(1)));
  auto power = [&](std::size_t i, unsigned e) -> const MultiPoly<Coeff>& {
    while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * substitutions[i]);
    return powers[i][e];
  };
  MultiPoly<Coeff> r(m);
  for (const auto& [alpha, c] : p.terms()) {
    MultiPoly<Coeff> term = MultiPoly<Coeff>::constant(m, c);
    for (std::size_t i = 0; i < alpha.dimension(); ++i)
      if (alpha[i] > 0) term *= power(i, alpha[i]);
    r += term;
  }
  return r;
}

/// p(A x) for a row-major n x n matrix A.
template <class Coeff>
MultiPoly<Coeff> compose_linear(const MultiPoly<Coeff>& p, std::span<const Coeff> matrix) {
  const std::size_t n = p.dimension();
  if (matrix.size() != n * n) throw DimensionError("linear map must be n x n");
  VectorPoly<Coeff> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly<Coeff> row(n);
    for (std::size_t j = 0; j < n; ++j) row.add_term(MultiIndex::unit(n, j), matrix[i * n + j]);
    rows.push_back(row * Coeff(1));
  }
  return compose(p, rows);
}

/// Explicit lowering from exact to floating coefficients.
inline MultiPoly<double> lower(const MultiPoly<Rational>& p) {
  MultiPoly<double> r(p.dimension());
  for (const auto& [alpha, c] : p.terms()) r.add_term(alpha, c.convert_to<double>());
  return r * 1.0;
}

inline VectorPoly<double> lower(const VectorPoly<Rational>& u) {
  VectorPoly<double> r(u.dimension());
  for (const auto& c : u.components()) r.push_back(lower(c));
  return r;
}

}  // namespace harmonic_ball
