#pragma once

// Textual polynomial format.
//
//   polynomial := "0" | term { ("+" | "-") term }
//   term       := [sign] factor { "*" factor }
//   factor     := coefficient | variable
//   coefficient:= digits [ "/" digits ]            (exact)
//               | decimal literal [ "/" literal ]  (floating)
//   variable   := "x" index [ "^" exponent ]        (index is 1-based)
//
// The printer emits every term as `c * x1^a1 * x2^a2 ...` in descending
// graded lexicographic order, joined by " + " / " - ", with the coefficient
// always present and exponent 1 omitted. parse(format(p)) == p holds exactly
// for rational coefficients.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "polynomial.hpp"

namespace harmonic_ball {

template <class Coeff>
std::string format_polynomial(const MultiPoly<Coeff>& p) {
  using traits = CoeffTraits<Coeff>;
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [alpha, c] = *it;
    const bool negative = c < Coeff(0);
    std::string coeff = traits::to_string(negative ? Coeff(-c) : c);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += coeff;
    for (std::size_t i = 0; i < alpha.dimension(); ++i) {
      if (alpha[i] == 0) continue;
      out += " * x";
      out += std::to_string(i + 1);
      if (alpha[i] > 1) {
        out += '^';
        out += std::to_string(alpha[i]);
      }
    }
  }
  return out;
}

namespace detail {

template <class Coeff>
class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t dimension) : text_(text), dimension_(dimension) {}

  MultiPoly<Coeff> parse() {
    MultiPoly<Coeff> result(dimension_);
    skip_space();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (!first) {
        const char op = peek();
        if (op != '+' && op != '-') fail("expected '+' or '-'");
        sign = op == '-' ? -1 : 1;
        ++pos_;
        skip_space();
      }
      while (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -sign;
        ++pos_;
        skip_space();
      }
      parse_term(result, sign);
      first = false;
      skip_space();
    }
    return result;
  }

 private:
  void parse_term(MultiPoly<Coeff>& result, int sign) {
    Coeff coeff(sign);
    MultiIndex alpha(dimension_);
    bool need_factor = true;
    while (need_factor) {
      skip_space();
      if (peek() == 'x') {
        ++pos_;
        const unsigned index = parse_unsigned();
        if (index == 0 || index > dimension_) fail("variable index out of range");
        unsigned power = 1;
        skip_space();
        if (peek() == '^') {
          ++pos_;
          skip_space();
          power = parse_unsigned();
        }
        alpha.set(index - 1, alpha[index - 1] + power);
      } else {
        coeff *= parse_coefficient();
      }
      skip_space();
      need_factor = peek() == '*';
      if (need_factor) ++pos_;
    }
    result.add_term(alpha, coeff);
  }

  Coeff parse_coefficient() {
    Coeff num = parse_number();
    skip_space();
    if (peek() == '/') {
      ++pos_;
      skip_space();
      Coeff den = parse_number();
      if (den == Coeff(0)) fail("zero denominator");
      num /= den;
    }
    return num;
  }

  Coeff parse_number() {
    const std::size_t start = pos_;
    if constexpr (CoeffTraits<Coeff>::is_exact) {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == start) fail("expected a number");
      return Coeff(Integer(std::string(text_.substr(start, pos_ - start))));
    } else {
      const std::string rest(text_.substr(start));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("expected a number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return v;
    }
  }

  unsigned parse_unsigned() {
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<unsigned long>(peek() - '0');
      if (v > 65535) fail("integer too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected an integer");
    return static_cast<unsigned>(v);
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t dimension_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class Coeff = Rational>
MultiPoly<Coeff> parse_polynomial(std::string_view text, std::size_t dimension) {
  return detail::PolyParser<Coeff>(text, dimension).parse();
}

}  // namespace harmonic_ball
