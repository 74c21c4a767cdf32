#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "gbpcrps/quadrature.hpp"
#include "gbpcrps/specfun.hpp"
#include "specfun/series.hpp"

namespace gbpcrps::specfun {

namespace {

constexpr double kSeriesSwitch = 0.75;
constexpr double kIntegerGuard = 1e-3;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double distance_to_integer(double x) { return std::fabs(x - std::round(x)); }

// Gauss summation 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
double gauss_sum(double a, double b, double c) {
  const double m = c - a - b;
  if (!(m > 0.0)) {
    throw DomainError("hyp2f1: series diverges at z = 1 (c - a - b <= 0)");
  }
  return gamma_ratio({c, m}, {c - a, c - b});
}

// z -> 1 - z connection formula, valid when c - a - b is not an integer.
double connection(double a, double b, double c, double zc, const SeriesControl& ctrl) {
  const double m = c - a - b;
  const double first = gamma_ratio({c, m}, {c - a, c - b});
  const double second = gamma_ratio({c, -m}, {a, b});
  double value = 0.0;
  if (first != 0.0) value += first * detail::series_2f1(a, b, 1.0 - m, zc, ctrl);
  if (second != 0.0) {
    value += std::pow(zc, m) * second * detail::series_2f1(c - a, c - b, 1.0 + m, zc, ctrl);
  }
  return value;
}

// Continues the solution of the hypergeometric equation
//   z (1 - z) F'' + [c - (a + b + 1) z] F' - a b F = 0
// from z = 1/2 to the target by re-expanding it in Taylor series. Every step
// covers half the distance to the singular point z = 1, so the local series
// converge geometrically with ratio <= 1/2.
double ode_continuation(double a, double b, double c, double z, double zc,
                        const SeriesControl& ctrl) {
  double here = 0.5;
  double dist = 0.5;  // 1 - here
  double f = detail::series_2f1(a, b, c, here, ctrl);
  double df = a * b / c * detail::series_2f1(a + 1.0, b + 1.0, c + 1.0, here, ctrl);
  const double ab = a * b;
  const double q1 = -(a + b + 1.0);

  constexpr int kMaxSteps = 5000;
  constexpr int kMaxTaylorTerms = 600;
  constexpr double kEps = 1e-17;
  for (int step = 0; step < kMaxSteps && dist > zc; ++step) {
    const bool last = dist - zc <= 0.5 * dist;
    const double h = last ? dist - zc : 0.5 * dist;
    const double p0 = here * dist;
    const double p1 = dist - here;
    const double q0 = c + q1 * here;

    // e_n = c_n h^n for the local expansion F(here + h) = sum c_n h^n.
    double e_prev = f;
    double e_cur = df * h;
    double sum = e_prev + e_cur;
    double dsum = e_cur;  // h * F'(here + h) = sum n e_n
    int n = 0;
    for (; n < kMaxTaylorTerms; ++n) {
      const double nn = n;
      const double e_next = -((p1 * nn + q0) * (nn + 1.0) * e_cur * h +
                              (-nn * (nn - 1.0) + q1 * nn - ab) * e_prev * h * h) /
                            (p0 * (nn + 2.0) * (nn + 1.0));
      sum += e_next;
      dsum += (nn + 2.0) * e_next;
      const double scale = std::fabs(sum) + std::fabs(dsum);
      if (n >= 2 && (std::fabs(e_next) + std::fabs(e_cur)) * (nn + 2.0) <= kEps * scale) break;
      e_prev = e_cur;
      e_cur = e_next;
    }
    if (n == kMaxTaylorTerms) {
      throw ConvergenceError("hyp2f1: Taylor continuation did not converge");
    }
    f = sum;
    df = dsum / h;
    if (last) {
      here = z;
      dist = zc;
    } else {
      here += h;
      dist -= h;
    }
  }
  if (dist > zc) throw ConvergenceError("hyp2f1: Taylor continuation exceeded its step budget");
  return f;
}

double degenerate_fallback(double a, double b, double c, double z, double zc,
                           const SeriesControl& ctrl) {
  if ((c > b && b > 0.0) || (c > a && a > 0.0)) {
    return hyp2f1_euler_integral(a, b, c, z, zc, std::min(1e-13, ctrl.rel_tol));
  }
  return ode_continuation(a, b, c, z, zc, ctrl);
}

}  // namespace

namespace detail {

double series_2f1(double a, double b, double c, double z, const SeriesControl& ctrl) {
  // Geometric convergence makes the extra digits cheap; the bound is kept well
  // below rel_tol so that rel_tol is what callers see end to end.
  const double tol = std::max(1e-3 * ctrl.rel_tol, 1e-17);
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
    const double k = static_cast<double>(n);
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    // Once every Pochhammer factor is positive the ratios move monotonically
    // towards z, so max(ratio, z) bounds every later ratio.
    if (a + k + 1.0 > 0.0 && b + k + 1.0 > 0.0 && c + k + 1.0 > 0.0) {
      const double bound = std::max(std::fabs(ratio), z);
      if (bound < 1.0 && std::fabs(term) * bound / (1.0 - bound) <= tol * std::fabs(sum)) {
        return sum;
      }
    }
  }
  throw ConvergenceError("hyp2f1: power series exceeded max_terms");
}

}  // namespace detail

double hyp2f1_split(double a, double b, double c, double z, double zc, const SeriesControl& ctrl) {
  ctrl.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw DomainError("hyp2f1: parameters must be finite");
  }
  if (!(c > 0.0)) {
    throw DomainError("hyp2f1: c must be positive");
  }
  if (!(z >= 0.0 && z <= 1.0) || !(zc >= 0.0 && zc <= 1.0)) {
    throw DomainError("hyp2f1: z must lie in [0, 1]");
  }
  if (a > b) std::swap(a, b);

  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return detail::series_2f1(a, b, c, z, ctrl);  // terminating polynomial
  }
  if (zc == 0.0) return gauss_sum(a, b, c);
  if (z < kSeriesSwitch) return detail::series_2f1(a, b, c, z, ctrl);

  if (distance_to_integer(c - a - b) < kIntegerGuard) {
    return degenerate_fallback(a, b, c, z, zc, ctrl);
  }
  return connection(a, b, c, zc, ctrl);
}

double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctrl) {
  return hyp2f1_split(a, b, c, z, 1.0 - z, ctrl);
}

double hyp2f1_euler_integral(double a, double b, double c, double z, double zc, double rel_tol) {
  if (!(c > b && b > 0.0)) std::swap(a, b);
  if (!(c > b && b > 0.0)) {
    throw DomainError("hyp2f1_euler_integral: needs c > b > 0 for one upper parameter");
  }
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("hyp2f1_euler_integral: z must lie in [0, 1]");
  const double e0 = b - 1.0;
  const double e1 = c - b - 1.0;
  auto integrand = [=](double t, double tc) {
    // tc: signed distance to the nearest endpoint.
    const double lo = tc < 0.0 ? -tc : t;       // t
    const double hi = tc > 0.0 ? tc : 1.0 - t;  // 1 - t
    const double base = zc + z * hi;            // 1 - z t
    return std::exp(e0 * std::log(lo) + e1 * std::log(hi) - a * std::log(base));
  };
  const quad::Result r = quad::tanh_sinh(integrand, 0.0, 1.0, rel_tol);
  if (!std::isfinite(r.value)) {
    throw ConvergenceError("hyp2f1_euler_integral: non-finite quadrature result");
  }
  if (!r.meets(100.0 * rel_tol)) {
    throw ToleranceNotMetError("hyp2f1_euler_integral: tolerance not met", r.value, r.error);
  }
  return gamma_ratio({c}, {b, c - b}) * r.value;
}

}  // namespace gbpcrps::specfun
