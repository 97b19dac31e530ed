#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdnoma {

/// Raised when an argument lies outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a series fails to converge or a result over/underflows.
/// Carries whatever partial value had been accumulated.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double partial_value, std::size_t terms)
      : std::runtime_error(what), partial_value_(partial_value), terms_(terms) {}

  double partial_value() const noexcept { return partial_value_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double partial_value_;
  std::size_t terms_;
};

}  // namespace fdnoma
