#ifndef GBPCRPS_SRC_SPECFUN_SERIES_HPP
#define GBPCRPS_SRC_SPECFUN_SERIES_HPP

#include "gbpcrps/specfun.hpp"

namespace gbpcrps::specfun::detail {

// Direct power series of 2F1(a, b; c; z) for 0 <= z < 1. No restriction on the
// sign of c beyond it not being a nonpositive integer.
double series_2f1(double a, double b, double c, double z, const SeriesControl& ctrl);

}  // namespace gbpcrps::specfun::detail

#endif  // GBPCRPS_SRC_SPECFUN_SERIES_HPP
