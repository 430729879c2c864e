#pragma once

#include <stdexcept>
#include <string>

namespace plab {

/// Argument outside the range served by a table or window.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Request exceeds a configured memory or size capacity.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Violated precondition on the arguments (coprimality, ordering, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A prime-class rule was asked about a prime beyond its last breakpoint.
class CoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Construction-time validation of a function family failed.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace plab
