#include "gbpcrps/crps_closed.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace gbpcrps {

using specfun::hyp2f1_split;
using specfun::log_beta;
using specfun::log_gamma;

std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::kGbp:
      return "gbp";
    case Formula::kSinghMaddala:
      return "singh-maddala";
    case Formula::kDagum:
      return "dagum";
    case Formula::kLogLogistic:
      return "log-logistic";
  }
  return "unknown";
}

WorkPoint WorkPoint::make(double p, double q, double y) {
  if (!std::isfinite(y)) throw DomainError("observation must be finite");
  if (y < 0.0) throw DomainError("closed forms need y >= 0");
  GbpParams unit{1.0, 1.0, p, q};
  const UnitPoint u = gbp::to_unit(unit, y);
  return WorkPoint{y, u.w, u.wc};
}

std::vector<std::string> CrpsWarnings::names() const {
  std::vector<std::string> out;
  if (ill_conditioned) out.emplace_back("ill-conditioned");
  if (extended) out.emplace_back("extended");
  return out;
}

ConstantTerms ConstantTermCache::get_or_compute(Formula formula, const GbpParams& params,
                                                const std::function<ConstantTerms()>& compute) {
  const Key key{static_cast<double>(formula), params.alpha, params.beta, params.p, params.q};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  // Computed outside the lock; a racing duplicate produces the same value.
  const ConstantTerms value = compute();
  ++misses_;
  std::unique_lock lock(mutex_);
  entries_.emplace(key, value);
  return value;
}

std::size_t ConstantTermCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

namespace {

void require_finite_mean(const GbpParams& params) {
  params.validate();
  if (!params.mean_finite()) throw InfiniteMeanError("infinite mean: beta * p <= 1");
}

ConstantTerms cached(Formula formula, const GbpParams& params, const CrpsOptions& opts,
                     const std::function<ConstantTerms()>& compute) {
  if (opts.cache != nullptr) return opts.cache->get_or_compute(formula, params, compute);
  return compute();
}

CrpsBreakdown assemble(Formula formula, const GbpParams& params, const ConstantTerms& k,
                       double e_abs) {
  CrpsBreakdown r;
  r.mu = k.mu;
  r.e_abs = e_abs;
  r.two_e_xf = k.two_e_xf;
  r.crps = e_abs - (k.two_e_xf - k.mu);
  r.formula = formula;
  r.warnings.ill_conditioned = params.beta * params.p <= 1.0 + kIllConditionedMargin;
  return r;
}

ConstantTerms gbp_constants(const GbpParams& prm, const specfun::SeriesControl& ctrl) {
  const double a = prm.alpha;
  const double b = prm.beta;
  const double ip = 1.0 / prm.p;
  const double lb = log_beta(a, b);
  ConstantTerms k;
  k.mu = gbp::mean(prm);
  const double hyp = specfun::hyp3f2_unit(a + b, 1.0, 2.0 * a + ip, a + 1.0, 2.0 * a + 2.0 * b, ctrl);
  k.two_e_xf = 2.0 * prm.q / a * std::exp(log_beta(2.0 * a + ip, 2.0 * b - ip) - 2.0 * lb) * hyp;
  return k;
}

}  // namespace

CrpsBreakdown crps_gbp(const GbpParams& params, double y, const CrpsOptions& opts) {
  require_finite_mean(params);
  opts.series.validate();
  const WorkPoint wp = WorkPoint::make(params.p, params.q, y);
  const ConstantTerms k =
      cached(Formula::kGbp, params, opts, [&] { return gbp_constants(params, opts.series); });

  const double a = params.alpha;
  const double b = params.beta;
  const double ip = 1.0 / params.p;
  double e_abs = k.mu;
  if (wp.y > 0.0) {
    const specfun::IncompleteBeta inc(a, b);
    const double lw = std::log(wp.w);
    const double lwc = std::log(wp.wc);
    const double shape_sum = a + b - 1.0;
    double tail;
    if (std::fabs(shape_sum) < kNearUnitShapeSum) {
      const double f = hyp2f1_split(a + b, 1.0, a + ip + 1.0, wp.w, wp.wc, opts.series);
      tail = -params.q * std::exp((a + ip) * lw + (b - ip) * lwc - inc.log_beta()) / (a + ip) * f;
    } else {
      const double f = hyp2f1_split(1.0, shape_sum, a + ip, wp.w, wp.wc, opts.series);
      tail = wp.y * std::exp((a - 1.0) * lw + b * lwc - inc.log_beta()) * (1.0 - f) / shape_sum;
    }
    e_abs = k.mu - wp.y + 2.0 * (wp.y * inc.regularized(wp.w, wp.wc) + tail);
  }
  return assemble(Formula::kGbp, params, k, e_abs);
}

CrpsBreakdown crps_singh_maddala(double beta, double p, double q, double y,
                                 const CrpsOptions& opts) {
  const GbpParams params{1.0, beta, p, q};
  require_finite_mean(params);
  opts.series.validate();
  const WorkPoint wp = WorkPoint::make(p, q, y);
  const double ip = 1.0 / p;
  const ConstantTerms k = cached(Formula::kSinghMaddala, params, opts, [&] {
    const double mu = q * beta * std::exp(log_beta(1.0 + ip, beta - ip));
    const double head =
        q * std::exp(log_gamma(2.0 * beta - ip) + log_gamma(1.0 + ip) - log_gamma(2.0 * beta));
    return ConstantTerms{mu, 2.0 * mu - head};
  });

  double e_abs = k.mu;
  if (wp.y > 0.0) {
    const double f = hyp2f1_split(1.0, beta, 1.0 + ip, wp.w, wp.wc, opts.series);
    e_abs = k.mu + wp.y * (1.0 - 2.0 * std::exp(beta * std::log(wp.wc)) * f);
  }
  return assemble(Formula::kSinghMaddala, params, k, e_abs);
}

CrpsBreakdown crps_dagum(double alpha, double p, double q, double y, const CrpsOptions& opts) {
  const GbpParams params{alpha, 1.0, p, q};
  require_finite_mean(params);
  opts.series.validate();
  const WorkPoint wp = WorkPoint::make(p, q, y);
  const double ip = 1.0 / p;
  const ConstantTerms k = cached(Formula::kDagum, params, opts, [&] {
    const double mu = q * alpha * std::exp(log_beta(alpha + ip, 1.0 - ip));
    const double two_e_xf =
        q * std::exp(log_gamma(1.0 - ip) + log_gamma(2.0 * alpha + ip) - log_gamma(2.0 * alpha));
    return ConstantTerms{mu, two_e_xf};
  });

  double e_abs = k.mu;
  if (wp.y > 0.0) {
    const double f = hyp2f1_split(1.0, alpha, alpha + ip, wp.w, wp.wc, opts.series);
    e_abs = k.mu - wp.y +
            2.0 * wp.y * std::exp((alpha - 1.0) * std::log(wp.w)) * (1.0 - wp.wc * f);
  }
  return assemble(Formula::kDagum, params, k, e_abs);
}

CrpsBreakdown crps_log_logistic(double p, double q, double y, const CrpsOptions& opts) {
  const GbpParams params{1.0, 1.0, p, q};
  require_finite_mean(params);
  opts.series.validate();
  const WorkPoint wp = WorkPoint::make(p, q, y);
  const ConstantTerms k = cached(Formula::kLogLogistic, params, opts, [&] {
    const double mu = q * std::numbers::pi / p / std::sin(std::numbers::pi / p);
    const double head = (p - 1.0) / p * mu;
    return ConstantTerms{mu, 2.0 * mu - head};
  });

  double e_abs = k.mu;
  if (wp.y > 0.0) {
    const double f = hyp2f1_split(1.0, 1.0, 1.0 + 1.0 / p, wp.w, wp.wc, opts.series);
    e_abs = k.mu + wp.y * (1.0 - 2.0 * wp.wc * f);
  }
  return assemble(Formula::kLogLogistic, params, k, e_abs);
}

Formula auto_formula(const GbpParams& params) {
  if (params.alpha == 1.0 && params.beta == 1.0) return Formula::kLogLogistic;
  if (params.alpha == 1.0) return Formula::kSinghMaddala;
  if (params.beta == 1.0) return Formula::kDagum;
  return Formula::kGbp;
}

CrpsBreakdown crps_auto(const GbpParams& params, double y, const CrpsOptions& opts) {
  require_finite_mean(params);
  if (!std::isfinite(y)) throw DomainError("observation must be finite");
  if (y < 0.0) {
    CrpsBreakdown r = crps_auto(params, 0.0, opts);
    r.e_abs += -y;
    r.crps += -y;
    r.warnings.extended = true;
    return r;
  }
  switch (auto_formula(params)) {
    case Formula::kLogLogistic:
      return crps_log_logistic(params.p, params.q, y, opts);
    case Formula::kSinghMaddala:
      return crps_singh_maddala(params.beta, params.p, params.q, y, opts);
    case Formula::kDagum:
      return crps_dagum(params.alpha, params.p, params.q, y, opts);
    case Formula::kGbp:
      break;
  }
  return crps_gbp(params, y, opts);
}

}  // namespace gbpcrps
