#ifndef GBPCRPS_GBP_DIST_HPP
#define GBPCRPS_GBP_DIST_HPP

// Generalized Beta-prime distribution GBP(alpha, beta, p, q) on [0, inf):
//   f(x) = p / (q B(alpha, beta)) (x/q)^(alpha p - 1) / (1 + (x/q)^p)^(alpha + beta)
// with F(x) = I_w(alpha, beta), w = (x/q)^p / (1 + (x/q)^p).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gbpcrps/errors.hpp"

namespace gbpcrps {

struct GbpParams {
  double alpha = 1.0;
  double beta = 1.0;
  double p = 1.0;
  double q = 1.0;

  // Throws DomainError unless all four parameters are positive and finite.
  void validate() const;
  // E[X] < inf exactly when beta * p > 1.
  bool mean_finite() const { return beta * p > 1.0; }

  friend bool operator==(const GbpParams&, const GbpParams&) = default;
};

// w = (x/q)^p / (1 + (x/q)^p) together with 1 - w, both without cancellation.
struct UnitPoint {
  double w = 0.0;
  double wc = 1.0;
};

namespace gbp {

inline constexpr std::size_t kDefaultChunk = std::size_t{1} << 20;

UnitPoint to_unit(const GbpParams& params, double x);

// Density at x >= 0. At x = 0: 0 when alpha p > 1, p / (q B) when alpha p == 1,
// +infinity when alpha p < 1.
double pdf(const GbpParams& params, double x);
double cdf(const GbpParams& params, double x);
// 1 - cdf(x).
double survival(const GbpParams& params, double x);
// q B(alpha + 1/p, beta - 1/p) / B(alpha, beta). InfiniteMeanError if beta p <= 1.
double mean(const GbpParams& params);
// Inverse of cdf on (0, 1).
double quantile(const GbpParams& params, double u);

// One draw X = q (G1 / G2)^(1/p) with G1 ~ Gamma(alpha), G2 ~ Gamma(beta), so
// that w = G1 / (G1 + G2) ~ Beta(alpha, beta) is the draw's own cdf coordinate.
struct Draw {
  double x;
  double w;
  double wc;
};

class Sampler {
 public:
  explicit Sampler(const GbpParams& params);

  template <class Engine>
  Draw operator()(Engine& engine) {
    const double g1 = shape_alpha_(engine);
    const double g2 = shape_beta_(engine);
    const double total = g1 + g2;
    return Draw{q_ * std::exp((std::log(g1) - std::log(g2)) * inv_p_), g1 / total, g2 / total};
  }

 private:
  std::gamma_distribution<double> shape_alpha_;
  std::gamma_distribution<double> shape_beta_;
  double q_;
  double inv_p_;
};

// n draws; chunk c of size `chunk` comes from chunk_engine(seed, c), so the
// output is identical for every worker count.
std::vector<double> sample(const GbpParams& params, std::uint64_t seed, std::size_t n,
                           std::size_t chunk = kDefaultChunk, unsigned workers = 1);

}  // namespace gbp
}  // namespace gbpcrps

#endif  // GBPCRPS_GBP_DIST_HPP
