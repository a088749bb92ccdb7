#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uadam {

/// Invalid or inconsistent configuration: dimension mismatches, missing rule
/// parameters, out-of-range hyperparameters, unknown identifiers.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coordinate-wise operation left its mathematical domain (zero divisor,
/// negative square root argument).
class NumericDomainError : public std::domain_error {
 public:
  NumericDomainError(const std::string& what, std::size_t index)
      : std::domain_error(what + " at coordinate " + std::to_string(index)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A run produced a non-finite iterate or hit a numeric-domain error.
/// Carries the 1-based step index at which it happened.
class NumericAbort : public std::runtime_error {
 public:
  NumericAbort(const std::string& what, std::size_t step)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace uadam
