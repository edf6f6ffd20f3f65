#pragma once

#include <stdexcept>

namespace qpd {

// Malformed input: non-unit strategy vectors, bad payoff orderings, bad literals.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric argument outside its admissible range (e.g. gamma outside [0, pi/2]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal cross-check failed (solver did not converge, a derived result
// disagrees with its verification).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qpd
