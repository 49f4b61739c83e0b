#pragma once

#include <stdexcept>
#include <string>

namespace harmonic_ball {

/// Argument has the wrong dimension (axis out of range, point of wrong length, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation refuses an input that violates its hypothesis
/// (non-harmonic map handed to an identity check, n < 3 for the minimiser bound, ...).
class RefusedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A ratio of energies was requested for a map with zero energy.
class ZeroEnergyError : public std::domain_error {
 public:
  explicit ZeroEnergyError(const std::string& what)
      : std::domain_error("zero Dirichlet energy: " + what) {}
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace harmonic_ball
