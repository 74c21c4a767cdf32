#ifndef GBPCRPS_CRPS_CLOSED_HPP
#define GBPCRPS_CRPS_CLOSED_HPP

// Closed-form CRPS of the generalized Beta-prime distribution and its
// Singh-Maddala (alpha = 1), Dagum (beta = 1) and log-logistic
// (alpha = beta = 1) special cases.
//
// Every result is split along CRPS = E|X - y| - E[X (2 F(X) - 1)]:
//   crps = e_abs - (two_e_xf - mu)
// where two_e_xf = 2 E[X F(X)] depends on the distribution only.

#include <array>
#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "gbpcrps/gbp_dist.hpp"
#include "gbpcrps/specfun.hpp"

namespace gbpcrps {

enum class Formula { kGbp, kSinghMaddala, kDagum, kLogLogistic };

std::string_view to_string(Formula f);

// Observation y with its coordinate w = y^p / (q^p + y^p) and wc = 1 - w.
struct WorkPoint {
  double y = 0.0;
  double w = 0.0;
  double wc = 1.0;

  static WorkPoint make(double p, double q, double y);
};

struct CrpsWarnings {
  // 1 < beta p <= 1 + 1e-9: Gamma(beta - 1/p) and the 3F2 tail are near-singular.
  bool ill_conditioned = false;
  // y < 0 was scored as CRPS(F | 0) + |y|.
  bool extended = false;

  std::vector<std::string> names() const;
  bool any() const { return ill_conditioned || extended; }
};

struct CrpsBreakdown {
  double mu = 0.0;
  double e_abs = 0.0;
  double two_e_xf = 0.0;
  double crps = 0.0;
  Formula formula = Formula::kGbp;
  CrpsWarnings warnings;
};

// The observation-independent part of a score: mu and two_e_xf.
struct ConstantTerms {
  double mu = 0.0;
  double two_e_xf = 0.0;
};

// Memo of ConstantTerms keyed on (formula, alpha, beta, p, q), so batch
// scoring against one distribution evaluates the 3F2 term once. Safe for
// concurrent use. Entries assume the SeriesControl they were computed with;
// use one cache per control setting.
class ConstantTermCache {
 public:
  ConstantTerms get_or_compute(Formula formula, const GbpParams& params,
                               const std::function<ConstantTerms()>& compute);

  std::size_t size() const;
  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

 private:
  using Key = std::array<double, 5>;
  mutable std::shared_mutex mutex_;
  std::map<Key, ConstantTerms> entries_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct CrpsOptions {
  specfun::SeriesControl series;
  ConstantTermCache* cache = nullptr;
};

// Below this |alpha + beta - 1| the GBP formula switches to the form without
// the 1 / (alpha + beta - 1) factor.
inline constexpr double kNearUnitShapeSum = 1e-8;
inline constexpr double kIllConditionedMargin = 1e-9;

CrpsBreakdown crps_gbp(const GbpParams& params, double y, const CrpsOptions& opts = {});
CrpsBreakdown crps_singh_maddala(double beta, double p, double q, double y,
                                 const CrpsOptions& opts = {});
CrpsBreakdown crps_dagum(double alpha, double p, double q, double y, const CrpsOptions& opts = {});
CrpsBreakdown crps_log_logistic(double p, double q, double y, const CrpsOptions& opts = {});

// Routes to the special-case formula when alpha == 1 and/or beta == 1 (exact
// comparison), otherwise crps_gbp. Observations y < 0 are scored as
// CRPS(F | 0) + |y| and flagged `extended`.
CrpsBreakdown crps_auto(const GbpParams& params, double y, const CrpsOptions& opts = {});

// The formula crps_auto would use for these parameters.
Formula auto_formula(const GbpParams& params);

}  // namespace gbpcrps

#endif  // GBPCRPS_CRPS_CLOSED_HPP
