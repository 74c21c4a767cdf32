#ifndef GBPCRPS_VERIFY_HPP
#define GBPCRPS_VERIFY_HPP

// Oracles that check the closed forms without using them: direct quadrature
// of the CRPS integral, seeded Monte Carlo, and the reproduction harnesses
// built on top of them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gbpcrps/crps_closed.hpp"
#include "gbpcrps/gbp_dist.hpp"

namespace gbpcrps::verify {

// ---------------------------------------------------------------- quadrature

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;

  void validate() const;
};

// int_0^y F(x)^2 dx + int_y^inf (1 - F(x))^2 dx, each piece mapped onto a
// subinterval of [0, 1] by u = x^p / (q^p + x^p). The split of the two pieces
// is the observation y. Requires beta p > 1/2 and y >= 0. Throws
// ToleranceNotMetError (carrying the estimate) if the error bound exceeds
// max(abs_tol, rel_tol * |value|).
double crps_quadrature(const GbpParams& params, double y, const QuadratureSpec& spec = {});

// int_0^y F(x) dx by the same substitution.
double cdf_integral(const GbpParams& params, double y, const QuadratureSpec& spec = {});

// --------------------------------------------------------------- Monte Carlo

enum class McEstimator {
  kCdf,     // |X - y| - X (2 F(X) - 1), one value per draw
  kEnergy,  // (|X - y| + |X' - y|) / 2 - |X - X'| / 2, one value per draw pair
};

std::string_view to_string(McEstimator e);
McEstimator parse_estimator(std::string_view name);

struct McConfig {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 42;
  McEstimator estimator = McEstimator::kCdf;
  std::size_t chunk = gbp::kDefaultChunk;
  unsigned workers = 1;

  void validate() const;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  // Draws for kCdf, draw pairs for kEnergy.
  std::size_t samples = 0;
};

// Draws follow gbp::sample(params, seed, n, chunk). Energy pairs are formed
// inside each chunk; an odd draw at the end of a chunk is dropped. The result
// does not depend on cfg.workers.
McEstimate crps_mc(const GbpParams& params, double y, const McConfig& cfg);

// ---------------------------------------------------------- reference table

struct ReferenceRow {
  GbpParams params;
  double y;
  double published;  // reference value, 6 decimals
};

// The 15 reference cases.
const std::vector<ReferenceRow>& table1_rows();

inline constexpr double kPublishedTolerance = 5e-7;
inline constexpr double kMcSigmas = 5.0;

struct Table1Row {
  ReferenceRow ref;
  std::optional<double> analytic;
  std::string formula;
  std::optional<McEstimate> mc;
  double rel_error = 0.0;  // |mc - analytic| / analytic
  double z = 0.0;          // |mc - analytic| / std_error
  bool analytic_ok = false;
  bool mc_ok = false;
  std::string error;

  bool ok() const { return analytic_ok && mc_ok && error.empty(); }
};

struct Table1Report {
  McConfig config;
  std::vector<Table1Row> rows;

  bool passed() const;
};

// Requires n >= 10^4. Row failures are recorded in the row, not thrown.
Table1Report table1_report(std::size_t n, std::uint64_t seed,
                           McEstimator estimator = McEstimator::kCdf, unsigned workers = 1,
                           std::size_t chunk = gbp::kDefaultChunk);

// ------------------------------------------------------ quadrature agreement

struct QuadRow {
  GbpParams params;
  double y = 0.0;
  double analytic = 0.0;
  double quadrature = 0.0;
  double diff = 0.0;
  double bound = 0.0;  // 1e-7 (1 + |analytic|)
  std::string error;

  bool ok() const { return error.empty() && diff <= bound; }
};

struct QuadReport {
  QuadratureSpec spec;
  std::vector<QuadRow> rows;

  bool passed() const;
  double max_diff() const;
};

// The reference cases plus `grid` random cases with beta p in (1.05, 20).
QuadReport quad_report(const QuadratureSpec& spec, std::size_t grid = 0, std::uint64_t seed = 42);

// A random valid (params, y) with beta p in (1.05, 20). Shapes in (0.3, 6),
// p in (0.3, 25), q log-uniform in (0.1, 10), y = q exp(N(0, 1)).
struct RandomCase {
  GbpParams params;
  double y;
};
std::vector<RandomCase> random_cases(std::size_t count, std::uint64_t seed);

// ------------------------------------------------------------- reductions

struct ReductionPair {
  std::string name;  // e.g. "gbp~singh-maddala"
  std::size_t cases = 0;
  double max_rel = 0.0;
  RandomCase worst{};
  std::string error;
};

struct ReductionReport {
  std::vector<ReductionPair> pairs;
  // Every formula at alpha = beta = 1, p = 2, q = 1, y = 1 against 1 - pi/4.
  double anchor_max_abs = 0.0;

  static constexpr double kPairTolerance = 1e-9;
  static constexpr double kAnchorTolerance = 1e-10;

  bool passed() const;
};

// grid_size cases per pair. DomainError if grid_size == 0.
ReductionReport reduction_check(std::size_t grid_size, std::uint64_t seed = 42);

// ---------------------------------------------------------------- rendering

nlohmann::json to_json(const Table1Report& r);
nlohmann::json to_json(const QuadReport& r);
nlohmann::json to_json(const ReductionReport& r);
std::string to_text(const Table1Report& r);
std::string to_text(const QuadReport& r);
std::string to_text(const ReductionReport& r);

}  // namespace gbpcrps::verify

#endif  // GBPCRPS_VERIFY_HPP
