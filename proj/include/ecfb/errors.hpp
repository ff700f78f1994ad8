#pragma once

#include <stdexcept>
#include <string>

namespace ecfb {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure did not reach its tolerance. Carries the best
/// estimate found and a bound on its error.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// Root bracket without a sign change.
class BracketError : public NumericError {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : NumericError(what, 0.5 * (lo + hi), 0.5 * (hi - lo)), lo_(lo), hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// The requested compensation cannot be reached inside the search range.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecfb
