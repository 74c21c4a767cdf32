#include "gbpcrps/gbp_dist.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gbpcrps/parallel.hpp"
#include "gbpcrps/specfun.hpp"

namespace gbpcrps {

void GbpParams::validate() const {
  for (double v : {alpha, beta, p, q}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("GBP parameters must be positive and finite");
    }
  }
}

namespace gbp {

namespace {

void check_support(double x, const char* who) {
  if (!(x >= 0.0)) throw DomainError(std::string(who) + ": x must be nonnegative");
}

}  // namespace

UnitPoint to_unit(const GbpParams& params, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  // w = 1 / (1 + (x/q)^-p), wc = 1 / (1 + (x/q)^p)
  const double log_ratio = params.p * (std::log(x) - std::log(params.q));
  return {1.0 / (1.0 + std::exp(-log_ratio)), 1.0 / (1.0 + std::exp(log_ratio))};
}

double pdf(const GbpParams& params, double x) {
  params.validate();
  check_support(x, "pdf");
  const double lb = specfun::log_beta(params.alpha, params.beta);
  const double ap = params.alpha * params.p;
  if (x == 0.0) {
    if (ap > 1.0) return 0.0;
    if (ap < 1.0) return std::numeric_limits<double>::infinity();
    return params.p / params.q * std::exp(-lb);
  }
  if (std::isinf(x)) return 0.0;
  const double log_r = std::log(x) - std::log(params.q);
  // log(1 + r^p) without overflow for large r.
  const double pl = params.p * log_r;
  const double log1p_rp = pl > 0.0 ? pl + std::log1p(std::exp(-pl)) : std::log1p(std::exp(pl));
  return params.p / params.q *
         std::exp((ap - 1.0) * log_r - (params.alpha + params.beta) * log1p_rp - lb);
}

double cdf(const GbpParams& params, double x) {
  params.validate();
  check_support(x, "cdf");
  const UnitPoint u = to_unit(params, x);
  return specfun::IncompleteBeta(params.alpha, params.beta).regularized(u.w, u.wc);
}

double survival(const GbpParams& params, double x) {
  params.validate();
  check_support(x, "survival");
  const UnitPoint u = to_unit(params, x);
  return specfun::IncompleteBeta(params.alpha, params.beta).complement(u.w, u.wc);
}

double mean(const GbpParams& params) {
  params.validate();
  if (!params.mean_finite()) throw InfiniteMeanError("infinite mean: beta * p <= 1");
  const double inv_p = 1.0 / params.p;
  return params.q * std::exp(specfun::log_beta(params.alpha + inv_p, params.beta - inv_p) -
                             specfun::log_beta(params.alpha, params.beta));
}

double quantile(const GbpParams& params, double u) {
  params.validate();
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: probability must lie in (0, 1)");
  const specfun::BetaQuantile v = specfun::inverse_reg_inc_beta(u, params.alpha, params.beta);
  return params.q * std::exp((std::log(v.v) - std::log(v.vc)) / params.p);
}

Sampler::Sampler(const GbpParams& params)
    : shape_alpha_((params.validate(), params.alpha)),
      shape_beta_(params.beta),
      q_(params.q),
      inv_p_(1.0 / params.p) {}

std::vector<double> sample(const GbpParams& params, std::uint64_t seed, std::size_t n,
                           std::size_t chunk, unsigned workers) {
  params.validate();
  if (n == 0) throw DomainError("sample: n must be at least 1");
  if (chunk == 0) throw DomainError("sample: chunk must be at least 1");
  std::vector<double> out(n);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    auto engine = chunk_engine(seed, c);
    Sampler draw(params);
    const std::size_t end = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) out[i] = draw(engine).x;
  });
  return out;
}

}  // namespace gbp
}  // namespace gbpcrps
