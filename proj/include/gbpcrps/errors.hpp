#ifndef GBPCRPS_ERRORS_HPP
#define GBPCRPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gbpcrps {

// Argument outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The distribution has no finite mean (beta * p <= 1), so no closed form exists.
class InfiniteMeanError : public DomainError {
 public:
  InfiniteMeanError() : DomainError("infinite mean") {}
  explicit InfiniteMeanError(const std::string& what) : DomainError(what) {}
};

// A series or iteration did not meet its tolerance within the allowed work.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature finished without meeting the requested tolerance.
// The best estimate and its error bound are kept for the caller.
class ToleranceNotMetError : public std::runtime_error {
 public:
  ToleranceNotMetError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace gbpcrps

#endif  // GBPCRPS_ERRORS_HPP
