#ifndef GBPCRPS_SPECFUN_HPP
#define GBPCRPS_SPECFUN_HPP

// Real special functions needed by the CRPS closed forms: log-gamma and beta,
// the incomplete beta function, Gauss 2F1 on [0, 1] and 3F2 at unit argument.
//
// Every function here is pure and safe to call concurrently.

#include <cstddef>
#include <initializer_list>

#include "gbpcrps/errors.hpp"

namespace gbpcrps::specfun {

// Truncation and acceleration policy for hypergeometric series.
struct SeriesControl {
  double rel_tol = 1e-12;
  std::size_t max_terms = 100000;
  // 3F2 at unit argument: below this convergence exponent the partial sums
  // are accelerated instead of summed directly.
  double accel_threshold = 2.0;

  // Throws DomainError if rel_tol <= 0 or max_terms == 0.
  void validate() const;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

// B(a, b), evaluated through log_beta.
double beta(double a, double b);

// Product of Gamma functions num[0]*num[1]*... / (den[0]*den[1]*...), formed in
// log space and exponentiated once. Arguments may be negative. A pole in the
// denominator makes the ratio zero; a pole in the numerator is a DomainError.
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den);

// Unregularized lower incomplete beta B(w; a, b) = int_0^w t^(a-1) (1-t)^(b-1) dt.
double inc_beta_lower(double w, double a, double b);

// Regularized incomplete beta I_w(a, b).
double reg_inc_beta(double w, double a, double b);

// 1 - I_w(a, b), without forming the difference.
double reg_inc_beta_complement(double w, double a, double b);

// I_w(a, b) with ln B(a, b) computed once. Accepts the argument together with
// its complement so callers that know 1 - w exactly do not lose it to rounding.
class IncompleteBeta {
 public:
  IncompleteBeta(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double log_beta() const noexcept { return log_beta_; }

  // I_w(a, b) where wc == 1 - w.
  double regularized(double w, double wc) const;
  // 1 - I_w(a, b) where wc == 1 - w.
  double complement(double w, double wc) const;
  double regularized(double w) const { return regularized(w, 1.0 - w); }

  // d/dw I_w(a, b).
  double density(double w, double wc) const;

 private:
  double a_;
  double b_;
  double log_beta_;
};

// Solution v (and 1 - v) of I_v(a, b) = u.
struct BetaQuantile {
  double v;
  double vc;
};

// Inverse regularized incomplete beta for u in (0, 1). Safeguarded Newton
// iteration; absolute tolerance 1e-12 in v (or in 1 - v, whichever is smaller).
BetaQuantile inverse_reg_inc_beta(double u, double a, double b);

// Gauss hypergeometric 2F1(a, b; c; z) for z in [0, 1].
//   z < 0.75            direct power series
//   0.75 <= z < 1       z -> 1 - z connection formula; when c - a - b is within
//                       1e-3 of an integer, the Euler integral (or, where that
//                       integral diverges, analytic continuation of the
//                       hypergeometric ODE from z = 1/2)
//   z == 1              Gauss summation, requires c - a - b > 0
double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctrl = {});

// Same as hyp2f1 with the complement zc == 1 - z supplied by the caller.
double hyp2f1_split(double a, double b, double c, double z, double zc,
                    const SeriesControl& ctrl = {});

// 2F1 from the Euler integral
//   Gamma(c) / (Gamma(b) Gamma(c - b)) int_0^1 t^(b-1) (1-t)^(c-b-1) (1 - z t)^(-a) dt,
// using whichever of (a, b) satisfies c > b > 0. DomainError if neither does.
double hyp2f1_euler_integral(double a, double b, double c, double z, double zc,
                             double rel_tol = 1e-13);

// 3F2(a1, a2, a3; b1, b2; 1). Requires s = b1 + b2 - a1 - a2 - a3 > 0.
// An upper parameter equal to a lower one reduces to Gauss summation. Falls
// back to the Euler integral if the series route does not converge.
double hyp3f2_unit(double a1, double a2, double a3, double b1, double b2,
                   const SeriesControl& ctrl = {});

// The series route alone: direct summation with an integral tail estimate when
// s >= ctrl.accel_threshold, otherwise Richardson extrapolation of partial sums
// in the known powers N^(-s-j). Throws ConvergenceError rather than falling back.
double hyp3f2_unit_series(double a1, double a2, double a3, double b1, double b2,
                          const SeriesControl& ctrl = {});

// 3F2 at unit argument via the Euler integral
//   Gamma(b) / (Gamma(a) Gamma(b - a)) int_0^1 t^(a-1) (1-t)^(b-a-1) 2F1(.,.;.;t) dt
// for some pairing of an upper parameter a and a lower parameter b with b > a > 0.
double hyp3f2_unit_euler_integral(double a1, double a2, double a3, double b1, double b2,
                                  const SeriesControl& ctrl = {});

}  // namespace gbpcrps::specfun

#endif  // GBPCRPS_SPECFUN_HPP
