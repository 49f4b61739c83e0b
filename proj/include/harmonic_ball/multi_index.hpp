#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

#include "errors.hpp"

namespace harmonic_ball {

/// Exponent vector of a monomial x1^a1 * ... * xn^an. Its length is the
/// ambient dimension n.
class MultiIndex {
 public:
  using exponent_type = std::uint16_t;
  using storage = boost::container::small_vector<exponent_type, 12>;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : exps_(dimension, 0) {}
  MultiIndex(std::initializer_list<unsigned> exps) {
    exps_.reserve(exps.size());
    for (unsigned e : exps) push(e);
  }
  template <class It>
  MultiIndex(It first, It last) {
    for (; first != last; ++first) push(static_cast<unsigned>(*first));
  }

  static MultiIndex unit(std::size_t dimension, std::size_t axis, unsigned power = 1) {
    MultiIndex m(dimension);
    m.set(axis, power);
    return m;
  }

  std::size_t dimension() const noexcept { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  void set(std::size_t i, unsigned e) {
    degree_ = degree_ - exps_[i] + e;
    exps_[i] = static_cast<exponent_type>(e);
  }

  unsigned total_degree() const noexcept { return degree_; }

  bool all_even() const noexcept {
    return std::all_of(exps_.begin(), exps_.end(), [](exponent_type e) { return e % 2 == 0; });
  }

  auto begin() const noexcept { return exps_.begin(); }
  auto end() const noexcept { return exps_.end(); }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.dimension() != b.dimension()) throw DimensionError("multi-index dimension mismatch");
    MultiIndex r(a.dimension());
    const exponent_type* pa = a.exps_.data();
    const exponent_type* pb = b.exps_.data();
    exponent_type* pr = r.exps_.data();
    for (std::size_t i = 0, n = a.dimension(); i < n; ++i) pr[i] = static_cast<exponent_type>(pa[i] + pb[i]);
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.degree_ == b.degree_ && a.dimension() == b.dimension() &&
           std::equal(a.data(), a.data() + a.dimension(), b.data());
  }

  const exponent_type* data() const noexcept { return exps_.data(); }

 private:
  void push(unsigned e) {
    exps_.push_back(static_cast<exponent_type>(e));
    degree_ += e;
  }

  storage exps_;
  unsigned degree_ = 0;
};

/// Graded lexicographic order: total degree first, then lexicographic with
/// x1 most significant.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const noexcept {
    const unsigned da = a.total_degree();
    const unsigned db = b.total_degree();
    if (da != db) return da < db;
    const auto* pa = a.data();
    const auto* pb = b.data();
    const std::size_t n = std::min(a.dimension(), b.dimension());
    for (std::size_t i = 0; i < n; ++i)
      if (pa[i] != pb[i]) return pa[i] < pb[i];
    return a.dimension() < b.dimension();
  }
};

}  // namespace harmonic_ball
