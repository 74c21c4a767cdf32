#include "gbpcrps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "gbpcrps/parallel.hpp"
#include "gbpcrps/quadrature.hpp"
#include "gbpcrps/specfun.hpp"

namespace gbpcrps::verify {

// ---------------------------------------------------------------- quadrature

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
}

namespace {

struct Piece {
  double value = 0.0;
  double error = 0.0;
};

// int over u in [lo, hi] of g(I_u) dx/du, where dx/du = (q/p) u^(1/p-1) (1-u)^(-1/p-1).
// lo_c and hi_c are 1 - lo and 1 - hi.
template <class G>
Piece integrate_unit(const GbpParams& prm, double lo, double lo_c, double hi, double hi_c,
                     double rel_tol, G g) {
  if (!(hi > lo)) return {};
  const specfun::IncompleteBeta inc(prm.alpha, prm.beta);
  const double ip = 1.0 / prm.p;
  const double log_scale = std::log(prm.q / prm.p);
  auto f = [&](double u, double d) {
    // d is the signed distance to the nearer endpoint.
    double v = u;
    double vc = 1.0 - u;
    if (d < 0.0) {
      v = lo - d;
      vc = lo_c + d;
    } else if (d > 0.0) {
      v = hi - d;
      vc = hi_c + d;
    }
    if (!(v > 0.0) || !(vc > 0.0)) return 0.0;
    const double gv = g(inc, v, vc);
    if (gv == 0.0) return 0.0;
    return std::exp(std::log(gv) + log_scale + (ip - 1.0) * std::log(v) - (ip + 1.0) * std::log(vc));
  };
  const quad::Result r = quad::tanh_sinh(f, lo, hi, rel_tol);
  return {r.value, r.error};
}

void check_quad_args(const GbpParams& params, double y, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (!std::isfinite(y) || y < 0.0) throw DomainError("quadrature needs a finite y >= 0");
}

// The rule's error estimate is the change between the last two levels, which
// overstates the error of the final level by orders of magnitude.
double internal_tol(const QuadratureSpec& spec) { return std::max(1e-2 * spec.rel_tol, 1e-15); }

}  // namespace

double crps_quadrature(const GbpParams& params, double y, const QuadratureSpec& spec) {
  check_quad_args(params, y, spec);
  if (!(params.beta * params.p > 0.5)) {
    throw DomainError("crps_quadrature: needs beta * p > 1/2");
  }
  const UnitPoint s = gbp::to_unit(params, y);
  const double tol = internal_tol(spec);
  const Piece below = integrate_unit(params, 0.0, 1.0, s.w, s.wc, tol,
                                     [](const specfun::IncompleteBeta& inc, double v, double vc) {
                                       const double f = inc.regularized(v, vc);
                                       return f * f;
                                     });
  const Piece above = integrate_unit(params, s.w, s.wc, 1.0, 0.0, tol,
                                     [](const specfun::IncompleteBeta& inc, double v, double vc) {
                                       const double f = inc.complement(v, vc);
                                       return f * f;
                                     });
  const double value = below.value + above.value;
  const double error = below.error + above.error;
  if (!std::isfinite(value) || error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(value))) {
    throw ToleranceNotMetError("crps_quadrature: tolerance not met", value, error);
  }
  return value;
}

double cdf_integral(const GbpParams& params, double y, const QuadratureSpec& spec) {
  check_quad_args(params, y, spec);
  const UnitPoint s = gbp::to_unit(params, y);
  const Piece r = integrate_unit(params, 0.0, 1.0, s.w, s.wc, internal_tol(spec),
                                 [](const specfun::IncompleteBeta& inc, double v, double vc) {
                                   return inc.regularized(v, vc);
                                 });
  if (!std::isfinite(r.value) || r.error > std::max(spec.abs_tol, spec.rel_tol * r.value)) {
    throw ToleranceNotMetError("cdf_integral: tolerance not met", r.value, r.error);
  }
  return r.value;
}

// --------------------------------------------------------------- Monte Carlo

std::string_view to_string(McEstimator e) { return e == McEstimator::kCdf ? "cdf" : "energy"; }

McEstimator parse_estimator(std::string_view name) {
  if (name == "cdf") return McEstimator::kCdf;
  if (name == "energy") return McEstimator::kEnergy;
  throw DomainError("unknown estimator '" + std::string(name) + "' (expected cdf or energy)");
}

void McConfig::validate() const {
  if (n < 2) throw DomainError("Monte Carlo needs n >= 2");
  if (chunk == 0) throw DomainError("Monte Carlo chunk must be at least 1");
  if (estimator == McEstimator::kEnergy && chunk < 2) {
    throw DomainError("energy estimator needs chunk >= 2");
  }
}

namespace {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / n;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }
};

}  // namespace

McEstimate crps_mc(const GbpParams& params, double y, const McConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!std::isfinite(y)) throw DomainError("observation must be finite");

  const std::size_t chunks = (cfg.n + cfg.chunk - 1) / cfg.chunk;
  std::vector<Moments> partial(chunks);
  parallel_for(chunks, cfg.workers, [&](std::size_t c) {
    auto engine = chunk_engine(cfg.seed, c);
    gbp::Sampler draw(params);
    const std::size_t len = std::min(cfg.n, (c + 1) * cfg.chunk) - c * cfg.chunk;
    Moments m;
    if (cfg.estimator == McEstimator::kCdf) {
      const specfun::IncompleteBeta inc(params.alpha, params.beta);
      for (std::size_t i = 0; i < len; ++i) {
        const gbp::Draw d = draw(engine);
        const double f = inc.regularized(d.w, d.wc);
        m.add(std::fabs(d.x - y) - d.x * (2.0 * f - 1.0));
      }
    } else {
      for (std::size_t i = 0; i + 1 < len; i += 2) {
        const double x1 = draw(engine).x;
        const double x2 = draw(engine).x;
        m.add(0.5 * (std::fabs(x1 - y) + std::fabs(x2 - y)) - 0.5 * std::fabs(x1 - x2));
      }
    }
    partial[c] = m;
  });

  Moments total;
  for (const Moments& m : partial) total.merge(m);
  if (total.count < 2) throw DomainError("Monte Carlo produced fewer than two samples");
  const double var = total.m2 / static_cast<double>(total.count - 1);
  return McEstimate{total.mean, std::sqrt(var / static_cast<double>(total.count)), total.count};
}

// ---------------------------------------------------------- reference table

const std::vector<ReferenceRow>& table1_rows() {
  static const std::vector<ReferenceRow> rows{
      {{1.0, 2.0, 1.5, 1.0}, 1.0, 0.253261},     {{1.0, 2.0, 1.5, 1.0}, 0.5, 0.130956},
      {{1.0, 2.0, 1.5, 1.0}, 2.0, 0.982212},     {{2.0, 3.0, 2.0, 1.0}, 1.0, 0.133398},
      {{1.0, 3.0, 2.0, 2.0}, 1.0, 0.157655},     {{0.5, 2.0, 2.0, 1.0}, 1.0, 0.385010},
      {{1.0, 2.0, 3.0, 1.0}, 1.0, 0.149604},     {{1.0, 2.0, 2.0, 1.0}, 1.0, 0.205476},
      {{1.0, 3.0, 1.5, 1.0}, 1.0, 0.358729},     {{1.0, 2.0, 3.14159, 1.0}, 1.0, 0.144072},
      {{2.0, 1.0, 2.0, 1.0}, 1.0, 0.420078},     {{3.0, 1.0, 1.5, 1.0}, 1.0, 1.131873},
      {{3.0, 1.0, 3.14159, 1.0}, 1.0, 0.363000}, {{2.0, 2.0, 1.0, 1.0}, 2.0, 0.577778},
      {{2.0, 1.5, 1.0, 3.0}, 1.0, 2.646148},
  };
  return rows;
}

bool Table1Report::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Table1Row& r) { return r.ok(); });
}

Table1Report table1_report(std::size_t n, std::uint64_t seed, McEstimator estimator,
                           unsigned workers, std::size_t chunk) {
  if (n < 10000) throw DomainError("table1_report needs n >= 10000");
  Table1Report report;
  report.config.n = n;
  report.config.seed = seed;
  report.config.estimator = estimator;
  report.config.workers = workers;
  report.config.chunk = chunk;
  report.config.validate();
  for (const ReferenceRow& ref : table1_rows()) {
    Table1Row row;
    row.ref = ref;
    try {
      const CrpsBreakdown b = crps_auto(ref.params, ref.y);
      row.analytic = b.crps;
      row.formula = std::string(to_string(b.formula));
      row.analytic_ok = std::fabs(b.crps - ref.published) <= kPublishedTolerance;
      row.mc = crps_mc(ref.params, ref.y, report.config);
      const double diff = std::fabs(row.mc->value - b.crps);
      row.rel_error = diff / std::fabs(b.crps);
      row.z = row.mc->std_error > 0.0 ? diff / row.mc->std_error : 0.0;
      row.mc_ok = diff <= kMcSigmas * row.mc->std_error;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ------------------------------------------------------ quadrature agreement

bool QuadReport::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const QuadRow& r) { return r.ok(); });
}

double QuadReport::max_diff() const {
  double m = 0.0;
  for (const QuadRow& r : rows) m = std::max(m, r.diff);
  return m;
}

std::vector<RandomCase> random_cases(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shape(0.3, 6.0);
  std::uniform_real_distribution<double> tail(1.05, 20.0);
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  std::normal_distribution<double> spread(0.0, 1.0);
  std::vector<RandomCase> out;
  out.reserve(count);
  while (out.size() < count) {
    const double alpha = shape(rng);
    const double beta = shape(rng);
    const double p = tail(rng) / beta;
    const double q = std::exp(log_scale(rng));
    const double y = q * std::exp(spread(rng));
    if (p < 0.3 || p > 25.0) continue;
    out.push_back({{alpha, beta, p, q}, y});
  }
  return out;
}

QuadReport quad_report(const QuadratureSpec& spec, std::size_t grid, std::uint64_t seed) {
  spec.validate();
  std::vector<RandomCase> cases;
  for (const ReferenceRow& r : table1_rows()) cases.push_back({r.params, r.y});
  for (const RandomCase& c : random_cases(grid, seed)) cases.push_back(c);

  QuadReport report;
  report.spec = spec;
  report.rows.resize(cases.size());
  parallel_for(cases.size(), default_workers(), [&](std::size_t i) {
    QuadRow& row = report.rows[i];
    row.params = cases[i].params;
    row.y = cases[i].y;
    try {
      row.analytic = crps_auto(row.params, row.y).crps;
      row.bound = 1e-7 * (1.0 + std::fabs(row.analytic));
      row.quadrature = crps_quadrature(row.params, row.y, spec);
      row.diff = std::fabs(row.analytic - row.quadrature);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return report;
}

// ------------------------------------------------------------- reductions

bool ReductionReport::passed() const {
  if (pairs.empty() || !(anchor_max_abs <= kAnchorTolerance)) return false;
  return std::all_of(pairs.begin(), pairs.end(), [](const ReductionPair& p) {
    return p.error.empty() && p.max_rel <= kPairTolerance;
  });
}

ReductionReport reduction_check(std::size_t grid_size, std::uint64_t seed) {
  if (grid_size == 0) throw DomainError("reduction_check needs grid_size >= 1");

  struct Spec {
    const char* name;
    // Maps a random case onto the pair's parameter slice and returns both values.
    std::pair<double, double> (*eval)(RandomCase&);
  };
  // With beta = 1 the finite-mean condition is on p alone, so those slices
  // reuse the case's beta * p, which lies in (1.05, 20).
  static constexpr Spec specs[] = {
      {"gbp~singh-maddala",
       [](RandomCase& c) {
         c.params.alpha = 1.0;
         const GbpParams& m = c.params;
         return std::pair{crps_gbp(m, c.y).crps, crps_singh_maddala(m.beta, m.p, m.q, c.y).crps};
       }},
      {"gbp~dagum",
       [](RandomCase& c) {
         c.params.p *= c.params.beta;
         c.params.beta = 1.0;
         const GbpParams& m = c.params;
         return std::pair{crps_gbp(m, c.y).crps, crps_dagum(m.alpha, m.p, m.q, c.y).crps};
       }},
      {"singh-maddala~log-logistic",
       [](RandomCase& c) {
         c.params.p *= c.params.beta;
         c.params.alpha = c.params.beta = 1.0;
         const GbpParams& m = c.params;
         return std::pair{crps_singh_maddala(1.0, m.p, m.q, c.y).crps,
                          crps_log_logistic(m.p, m.q, c.y).crps};
       }},
      {"dagum~log-logistic",
       [](RandomCase& c) {
         c.params.p *= c.params.beta;
         c.params.alpha = c.params.beta = 1.0;
         const GbpParams& m = c.params;
         return std::pair{crps_dagum(1.0, m.p, m.q, c.y).crps, crps_log_logistic(m.p, m.q, c.y).crps};
       }},
  };

  ReductionReport report;
  std::uint64_t stream = 0;
  for (const Spec& spec : specs) {
    ReductionPair pair;
    pair.name = spec.name;
    std::vector<RandomCase> cases = random_cases(grid_size, seed + stream++);
    std::vector<double> rel(cases.size(), 0.0);
    std::vector<std::string> errors(cases.size());
    parallel_for(cases.size(), default_workers(), [&](std::size_t i) {
      try {
        const auto [a, b] = spec.eval(cases[i]);
        rel[i] = std::fabs(a - b) / std::fabs(b);
        if (!std::isfinite(rel[i])) errors[i] = "non-finite value";
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
      ++pair.cases;
      if (!errors[i].empty()) {
        if (pair.error.empty()) pair.error = errors[i];
        continue;
      }
      if (rel[i] >= pair.max_rel) {
        pair.max_rel = rel[i];
        pair.worst = cases[i];
      }
    }
    report.pairs.push_back(std::move(pair));
  }

  const double exact = 1.0 - std::numbers::pi / 4.0;
  for (double v : {crps_gbp({1.0, 1.0, 2.0, 1.0}, 1.0).crps, crps_singh_maddala(1.0, 2.0, 1.0, 1.0).crps,
                   crps_dagum(1.0, 2.0, 1.0, 1.0).crps, crps_log_logistic(2.0, 1.0, 1.0).crps}) {
    report.anchor_max_abs = std::max(report.anchor_max_abs, std::fabs(v - exact));
  }
  return report;
}

// ---------------------------------------------------------------- rendering

namespace {

nlohmann::json params_json(const GbpParams& p, double y) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"p", p.p}, {"q", p.q}, {"y", y}};
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Table1Report& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Table1Row& row : r.rows) {
    nlohmann::json j = params_json(row.ref.params, row.ref.y);
    j["published"] = row.ref.published;
    if (row.analytic) {
      j["analytic"] = *row.analytic;
      j["formula"] = row.formula;
    }
    if (row.mc) {
      j["mc"] = row.mc->value;
      j["std_error"] = row.mc->std_error;
      j["rel_error"] = row.rel_error;
      j["z"] = row.z;
    }
    j["analytic_ok"] = row.analytic_ok;
    j["mc_ok"] = row.mc_ok;
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  return {{"report", "table1"},
          {"n", r.config.n},
          {"seed", r.config.seed},
          {"chunk", r.config.chunk},
          {"estimator", std::string(to_string(r.config.estimator))},
          {"rows", std::move(rows)},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const QuadReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const QuadRow& row : r.rows) {
    nlohmann::json j = params_json(row.params, row.y);
    j["analytic"] = row.analytic;
    j["quadrature"] = row.quadrature;
    j["diff"] = row.diff;
    j["bound"] = row.bound;
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  return {{"report", "quad"},
          {"abs_tol", r.spec.abs_tol},
          {"rel_tol", r.spec.rel_tol},
          {"rows", std::move(rows)},
          {"max_diff", r.max_diff()},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const ReductionReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const ReductionPair& p : r.pairs) {
    nlohmann::json j{{"pair", p.name}, {"cases", p.cases}, {"max_rel", p.max_rel},
                     {"worst", params_json(p.worst.params, p.worst.y)}};
    if (!p.error.empty()) j["error"] = p.error;
    pairs.push_back(std::move(j));
  }
  return {{"report", "reductions"},
          {"pairs", std::move(pairs)},
          {"anchor_max_abs", r.anchor_max_abs},
          {"tolerance", ReductionReport::kPairTolerance},
          {"passed", r.passed()}};
}

std::string to_text(const Table1Report& r) {
  std::ostringstream out;
  out << format("%5s %5s %7s %5s %5s  %9s %9s %9s %9s %9s %6s  %s\n", "alpha", "beta", "p", "q",
                "y", "published", "analytic", "mc", "std_err", "rel_err", "z", "status");
  for (const Table1Row& row : r.rows) {
    const GbpParams& m = row.ref.params;
    out << format("%5.2f %5.2f %7.5g %5.2f %5.2f  %9.6f ", m.alpha, m.beta, m.p, m.q, row.ref.y,
                  row.ref.published);
    if (!row.error.empty() && !row.mc) {
      if (row.analytic) {
        out << format("%9.6f ", *row.analytic);
      } else {
        out << format("%9s ", "-");
      }
      out << "error: " << row.error << '\n';
      continue;
    }
    out << format("%9.6f %9.6f %9.2e %9.2e %6.2f  %s\n", *row.analytic, row.mc->value,
                  row.mc->std_error, row.rel_error, row.z, row.ok() ? "ok" : "FAIL");
  }
  out << format("n = %zu, seed = %llu, estimator = %s: %s\n", r.config.n,
                static_cast<unsigned long long>(r.config.seed),
                std::string(to_string(r.config.estimator)).c_str(), r.passed() ? "PASS" : "FAIL");
  return out.str();
}

std::string to_text(const QuadReport& r) {
  std::ostringstream out;
  out << format("%8s %8s %8s %8s %10s  %12s %12s %9s  %s\n", "alpha", "beta", "p", "q", "y",
                "analytic", "quadrature", "diff", "status");
  for (const QuadRow& row : r.rows) {
    const GbpParams& m = row.params;
    out << format("%8.4g %8.4g %8.4g %8.4g %10.4g  ", m.alpha, m.beta, m.p, m.q, row.y);
    if (!row.error.empty()) {
      out << "error: " << row.error << '\n';
      continue;
    }
    out << format("%12.9f %12.9f %9.2e  %s\n", row.analytic, row.quadrature, row.diff,
                  row.ok() ? "ok" : "FAIL");
  }
  out << format("%zu cases, max diff %.2e: %s\n", r.rows.size(), r.max_diff(),
                r.passed() ? "PASS" : "FAIL");
  return out.str();
}

std::string to_text(const ReductionReport& r) {
  std::ostringstream out;
  for (const ReductionPair& p : r.pairs) {
    out << format("%-28s %5zu cases  max rel %.2e", p.name.c_str(), p.cases, p.max_rel);
    if (!p.error.empty()) out << "  error: " << p.error;
    out << '\n';
  }
  out << format("%-28s %5s        max abs %.2e\n", "anchor 1 - pi/4", "", r.anchor_max_abs);
  out << (r.passed() ? "PASS\n" : "FAIL\n");
  return out.str();
}

}  // namespace gbpcrps::verify
