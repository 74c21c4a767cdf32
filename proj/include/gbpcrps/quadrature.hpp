#ifndef GBPCRPS_QUADRATURE_HPP
#define GBPCRPS_QUADRATURE_HPP

// Thin wrapper around Boost's tanh-sinh rule. The integrand is called as
// f(x, xc) where xc is the signed distance to the nearest endpoint
// (a - x near a, b - x near b), so endpoint singularities can be evaluated
// without cancellation.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gbpcrps/errors.hpp"

namespace gbpcrps::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;

  bool meets(double rel_tol, double abs_tol = 0.0) const {
    return error <= abs_tol || error <= rel_tol * l1;
  }
};

template <class F>
Result tanh_sinh(F&& f, double a, double b, double rel_tol) {
  // Abscissa tables grow lazily, so each thread keeps its own integrator.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(18);
  Result r;
  try {
    r.value = integrator.integrate(f, a, b, rel_tol, &r.error, &r.l1);
  } catch (const boost::math::evaluation_error& e) {
    throw ConvergenceError(e.what());
  }
  return r;
}

}  // namespace gbpcrps::quad

#endif  // GBPCRPS_QUADRATURE_HPP
