#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wigner {

/// Malformed input: bad partition, tree property violation, bad config.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but outside the operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested work exceeds the configured budget.
class CapacityError : public std::length_error {
 public:
  CapacityError(const std::string& what, double required)
      : std::length_error(what), required_(required) {}

  double required() const noexcept { return required_; }

 private:
  double required_;
};

/// Non-finite values or overflow in a numeric routine.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wigner
