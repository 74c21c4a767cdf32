#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "gbpcrps/quadrature.hpp"
#include "gbpcrps/specfun.hpp"

namespace gbpcrps::specfun {

namespace {

constexpr std::size_t kRichardsonFirst = 32;
constexpr std::size_t kRichardsonLevels = 14;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

struct Params3F2 {
  std::array<double, 3> a;
  std::array<double, 2> b;

  double exponent() const { return b[0] + b[1] - a[0] - a[1] - a[2]; }

  double ratio(double n) const {
    return (a[0] + n) * (a[1] + n) * (a[2] + n) / ((b[0] + n) * (b[1] + n) * (n + 1.0));
  }

  // Index from which every term has the same sign and terms decrease.
  std::size_t asymptotic_start() const {
    double n = 0.0;
    for (double x : a) n = std::max(n, -x + 1.0);
    for (double x : b) n = std::max(n, -x + 1.0);
    std::size_t k = static_cast<std::size_t>(std::ceil(n));
    while (ratio(static_cast<double>(k)) >= 1.0 && k < 1000000) ++k;
    return k;
  }
};

double terminating_sum(const Params3F2& p) {
  double term = 1.0;
  double sum = 1.0;
  for (double n = 0.0; term != 0.0; n += 1.0) {
    term *= p.ratio(n);
    sum += term;
  }
  return sum;
}

// Direct summation with an integral estimate of the tail,
//   sum_{k>n} t_k ~ t_{n+1} (n+1)^(1+s) (n+1/2)^(-s) / s,
// accepted once the corrected estimate is stable across a doubling of n.
std::optional<double> direct_with_tail(const Params3F2& p, const SeriesControl& ctrl) {
  const double s = p.exponent();
  const std::size_t start = p.asymptotic_start();
  double term = 1.0;
  double sum = 1.0;
  std::size_t checkpoint = std::max<std::size_t>(64, start + 1);
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
    const double k = static_cast<double>(n);
    const double next = term * p.ratio(k);  // t_{n+1}
    if (n + 1 == checkpoint) {
      const double tail = next * std::pow(k + 1.0, 1.0 + s) * std::pow(k + 0.5, -s) / s;
      const double estimate = sum + tail;
      if (std::fabs(estimate - previous) <= ctrl.rel_tol * std::fabs(estimate)) return estimate;
      previous = estimate;
      checkpoint *= 2;
    }
    term = next;
    sum += term;
    if (term == 0.0) return sum;
  }
  return std::nullopt;
}

// Partial sums obey S - S_N ~ sum_j e_j N^(-s-j) with s known exactly, so
// Richardson extrapolation over N = N0, 2 N0, 4 N0, ... removes one power
// per column. Sums are compensated (Neumaier) to keep the extrapolation clean.
std::optional<double> accelerated(const Params3F2& p, const SeriesControl& ctrl) {
  const double s = p.exponent();
  std::size_t checkpoint = std::max<std::size_t>(kRichardsonFirst, 2 * p.asymptotic_start());
  std::vector<std::vector<double>> table;
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_change = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
    term *= p.ratio(static_cast<double>(n));
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    if (term == 0.0) return sum + comp;
    if (n + 1 != checkpoint) continue;
    checkpoint *= 2;

    std::vector<double> row{sum + comp};
    const std::size_t j = table.size();
    for (std::size_t m = 1; m <= j; ++m) {
      const double f = std::pow(2.0, s + static_cast<double>(m) - 1.0);
      row.push_back((f * row[m - 1] - table[j - 1][m - 1]) / (f - 1.0));
    }
    if (j > 0) {
      const double change = std::fabs(row[j] - table[j - 1][j - 1]);
      if (change < best_change) {
        best_change = change;
        best = row[j];
      }
      if (change <= ctrl.rel_tol * std::fabs(row[j])) return row[j];
    }
    table.push_back(std::move(row));
    if (table.size() >= kRichardsonLevels) break;
  }
  // Rounding can stall the diagonal just above a tight rel_tol.
  if (std::isfinite(best) && best_change <= std::max(ctrl.rel_tol, 1e-13) * std::fabs(best)) {
    return best;
  }
  return std::nullopt;
}

Params3F2 make_params(double a1, double a2, double a3, double b1, double b2) {
  for (double x : {a1, a2, a3, b1, b2}) {
    if (!std::isfinite(x)) throw DomainError("hyp3f2_unit: parameters must be finite");
  }
  if (!(b1 > 0.0) || !(b2 > 0.0)) throw DomainError("hyp3f2_unit: lower parameters must be positive");
  return Params3F2{{a1, a2, a3}, {b1, b2}};
}

}  // namespace


double hyp3f2_unit_series(double a1, double a2, double a3, double b1, double b2,
                          const SeriesControl& ctrl) {
  ctrl.validate();
  const Params3F2 p = make_params(a1, a2, a3, b1, b2);

  for (double x : p.a) {
    if (x == 0.0) return 1.0;
  }
  for (double x : p.a) {
    if (is_nonpositive_integer(x)) return terminating_sum(p);
  }
  // An upper parameter equal to a lower one cancels, leaving a Gauss sum.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (p.a[i] == p.b[j]) {
        const double u = p.a[(i + 1) % 3];
        const double v = p.a[(i + 2) % 3];
        return hyp2f1(u, v, p.b[1 - j], 1.0, ctrl);
      }
    }
  }

  const double s = p.exponent();
  if (!(s > 0.0)) {
    throw ConvergenceError("hyp3f2_unit: series diverges at unit argument (s <= 0)");
  }
  if (s >= ctrl.accel_threshold) {
    if (auto v = direct_with_tail(p, ctrl)) return *v;
  }
  if (auto v = accelerated(p, ctrl)) return *v;
  throw ConvergenceError("hyp3f2_unit: series did not converge within max_terms");
}

double hyp3f2_unit(double a1, double a2, double a3, double b1, double b2, const SeriesControl& ctrl) {
  try {
    return hyp3f2_unit_series(a1, a2, a3, b1, b2, ctrl);
  } catch (const ConvergenceError&) {
    const Params3F2 p = make_params(a1, a2, a3, b1, b2);
    if (!(p.exponent() > 0.0)) throw;
  }
  return hyp3f2_unit_euler_integral(a1, a2, a3, b1, b2, ctrl);
}

double hyp3f2_unit_euler_integral(double a1, double a2, double a3, double b1, double b2,
                                  const SeriesControl& ctrl) {
  const Params3F2 p = make_params(a1, a2, a3, b1, b2);
  if (!(p.exponent() > 0.0)) {
    throw ConvergenceError("hyp3f2_unit_euler_integral: s <= 0");
  }
  // Pick the pairing b_j > a_i > 0 with the widest gap b_j - a_i.
  int bi = -1;
  int bj = -1;
  double gap = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double g = p.b[j] - p.a[i];
      if (p.a[i] > 0.0 && g > gap) {
        gap = g;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi < 0) {
    throw DomainError("hyp3f2_unit_euler_integral: no pairing with b > a > 0");
  }
  const double a = p.a[bi];
  const double b = p.b[bj];
  const double u = p.a[(bi + 1) % 3];
  const double v = p.a[(bi + 2) % 3];
  const double c = p.b[1 - bj];
  const double e0 = a - 1.0;
  const double e1 = b - a - 1.0;
  // Near t = 1 the inner 2F1 can overflow when c - u - v < 0; its leading
  // behaviour Gamma(c) Gamma(u+v-c) / (Gamma(u) Gamma(v)) (1-t)^(c-u-v) is used there.
  const double inner_exponent = c - u - v;
  const double singular_coeff =
      inner_exponent < 0.0 ? gamma_ratio({c, -inner_exponent}, {u, v}) : 0.0;
  auto integrand = [&](double t, double tc) {
    const double lo = tc < 0.0 ? -tc : t;
    const double hi = tc > 0.0 ? tc : 1.0 - t;
    const double f = hyp2f1_split(u, v, c, lo, hi, ctrl);
    const double value = std::exp(e0 * std::log(lo) + e1 * std::log(hi)) * f;
    if (std::isfinite(value)) return value;
    return singular_coeff * std::exp(e0 * std::log(lo) + (e1 + inner_exponent) * std::log(hi));
  };
  const double tol = std::max(ctrl.rel_tol, 1e-13);
  const quad::Result r = quad::tanh_sinh(integrand, 0.0, 1.0, tol);
  if (!std::isfinite(r.value)) {
    throw ConvergenceError("hyp3f2_unit_euler_integral: non-finite quadrature result");
  }
  if (!r.meets(100.0 * tol)) {
    throw ToleranceNotMetError("hyp3f2_unit_euler_integral: tolerance not met", r.value, r.error);
  }
  return gamma_ratio({b}, {a, b - a}) * r.value;
}

}  // namespace gbpcrps::specfun
