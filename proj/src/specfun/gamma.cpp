#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "gbpcrps/specfun.hpp"

namespace gbpcrps::specfun {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw DomainError("SeriesControl: rel_tol must be positive");
  }
  if (max_terms == 0) {
    throw DomainError("SeriesControl: max_terms must be at least 1");
  }
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("log_beta: arguments must be positive");
  }
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
  double log_abs = 0.0;
  int sign = 1;
  for (double x : den) {
    if (!std::isfinite(x)) throw DomainError("gamma_ratio: non-finite argument");
    if (is_nonpositive_integer(x)) return 0.0;
  }
  for (double x : num) {
    if (!std::isfinite(x) || is_nonpositive_integer(x)) {
      throw DomainError("gamma_ratio: Gamma pole in numerator at " + std::to_string(x));
    }
    int s = 1;
    log_abs += boost::math::lgamma(x, &s);
    sign *= s;
  }
  for (double x : den) {
    int s = 1;
    log_abs -= boost::math::lgamma(x, &s);
    sign *= s;
  }
  return sign * std::exp(log_abs);
}

}  // namespace gbpcrps::specfun
