// Acceptance gate. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. `--slow` runs the 4e7-draw Monte Carlo criterion instead.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbpcrps/cli.hpp"
#include "gbpcrps/crps_closed.hpp"
#include "gbpcrps/specfun.hpp"
#include "gbpcrps/verify.hpp"

namespace {

using namespace gbpcrps;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome table1_analytic() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const verify::ReferenceRow& r : verify::table1_rows()) {
    worst = std::max(worst, std::fabs(crps_auto(r.params, r.y).crps - r.published));
  }
  const double secs = elapsed(start);
  const bool ok = worst <= verify::kPublishedTolerance && secs < 5.0;
  return {ok, format("15 rows, max |analytic - published| = %.2e <= 5e-7, runtime < 5 s", worst)};
}

Outcome quadrature_agreement() {
  const auto start = Clock::now();
  const verify::QuadReport r = verify::quad_report({1e-10, 1e-10}, 100, 42);
  const double secs = elapsed(start);
  std::size_t bad = 0;
  double worst = 0.0;
  for (const verify::QuadRow& row : r.rows) {
    if (!row.ok()) ++bad;
    worst = std::max(worst, row.diff / (1.0 + std::fabs(row.analytic)));
  }
  const bool ok = bad == 0 && r.rows.size() == 115 && secs < 60.0;
  return {ok, format("%zu rows, %zu failing, max diff / (1 + |v|) = %.2e <= 1e-7, runtime < 60 s",
                     r.rows.size(), bad, worst)};
}

Outcome mc_fast() {
  const auto start = Clock::now();
  const verify::Table1Report r = verify::table1_report(1'000'000, 42);
  const double secs = elapsed(start);
  double zmax = 0.0;
  bool rows_ok = true;
  for (const verify::Table1Row& row : r.rows) {
    rows_ok = rows_ok && row.error.empty() && row.mc && row.analytic;
    zmax = std::max(zmax, row.z);
  }
  const bool ok = rows_ok && zmax <= verify::kMcSigmas && secs < 30.0;
  return {ok, format("n = 1e6, seed 42, max |mc - analytic| / se = %.2f <= 5, runtime < 30 s", zmax)};
}

Outcome mc_slow() {
  const auto start = Clock::now();
  const verify::Table1Report r = verify::table1_report(40'000'000, 42);
  const double secs = elapsed(start);
  double zmax = 0.0, relmax = 0.0;
  bool rows_ok = true;
  for (const verify::Table1Row& row : r.rows) {
    rows_ok = rows_ok && row.error.empty() && row.mc && row.analytic;
    zmax = std::max(zmax, row.z);
    relmax = std::max(relmax, row.rel_error);
  }
  // "Order 1e-3 to 1e-4": the largest relative error stays below 5e-3.
  const bool ok = rows_ok && zmax <= verify::kMcSigmas && relmax < 5e-3 && secs < 600.0;
  return {ok, format("n = 4e7, seed 42, max rel error = %.2e < 5e-3, max z = %.2f, runtime < 600 s",
                     relmax, zmax)};
}

Outcome reductions() {
  const verify::ReductionReport r = verify::reduction_check(200, 42);
  double worst = 0.0;
  std::size_t cases = 0;
  for (const verify::ReductionPair& p : r.pairs) {
    worst = std::max(worst, p.max_rel);
    cases = std::min(cases == 0 ? p.cases : cases, p.cases);
  }
  const bool ok = r.passed() && cases == 200 && r.pairs.size() == 4;
  return {ok, format("4 pairs x %zu sets, max rel = %.2e <= 1e-9, anchor |v - (1 - pi/4)| = %.2e <= 1e-10",
                     cases, worst, r.anchor_max_abs)};
}

Outcome special_functions() {
  using namespace specfun;
  std::mt19937_64 rng(20240);

  std::uniform_real_distribution<double> shape(0.1, 20.0), unit(0.0, 1.0);
  double reflection = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = shape(rng), b = shape(rng), w = unit(rng);
    reflection = std::max(reflection, std::fabs(reg_inc_beta(w, a, b) + reg_inc_beta(1.0 - w, b, a) - 1.0));
  }

  std::uniform_real_distribution<double> par(0.1, 3.0), cpar(0.2, 4.0), zdist(0.0, 0.95);
  double recurrence = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = par(rng), b = par(rng), c = cpar(rng), z = zdist(rng);
    const double f = hyp2f1(a, b, c, z);
    const double resid = f - hyp2f1(a - 1.0, b, c, z) - b * z / c * hyp2f1(a, b + 1.0, c + 1.0, z);
    recurrence = std::max(recurrence, std::fabs(resid) / std::max(1.0, std::fabs(f)));
  }

  std::uniform_real_distribution<double> upper(0.2, 3.0), lower(0.5, 4.0), exponent(0.2, 5.0);
  double euler = 0.0;
  int sets = 0;
  while (sets < 50) {
    const double a1 = upper(rng), a2 = upper(rng), a3 = upper(rng), b1 = lower(rng);
    const double b2 = a1 + a2 + a3 + exponent(rng) - b1;
    if (b2 <= 0.2) continue;
    euler = std::max(euler, rel(hyp3f2_unit_series(a1, a2, a3, b1, b2),
                                hyp3f2_unit_euler_integral(a1, a2, a3, b1, b2)));
    ++sets;
  }

  const bool ok = reflection <= 1e-12 && recurrence <= 1e-9 && euler <= 1e-8;
  return {ok, format("reflection %.1e <= 1e-12, 2F1 recurrence %.1e <= 1e-9, 3F2 series vs Euler %.1e <= 1e-8 (50 sets)",
                     reflection, recurrence, euler)};
}

Outcome structural() {
  std::vector<verify::RandomCase> grid = verify::random_cases(200, 42);
  for (const verify::ReferenceRow& r : verify::table1_rows()) grid.push_back({r.params, r.y});

  double scale = 0.0, min_value = INFINITY, drift = 0.0;
  for (const verify::RandomCase& c : grid) {
    const GbpParams& m = c.params;
    const CrpsBreakdown b = crps_auto(m, c.y);
    min_value = std::min(min_value, b.crps);
    for (double k : {0.01, 3.7, 250.0}) {
      const double scaled = crps_auto({m.alpha, m.beta, m.p, k * m.q}, k * c.y).crps;
      scale = std::max(scale, rel(scaled, k * b.crps));
    }
    for (double y : {0.0, 0.5 * m.q, 40.0 * m.q}) {
      drift = std::max(drift, std::fabs(crps_auto(m, y).two_e_xf - b.two_e_xf));
    }
  }

  const GbpParams m{1, 2, 1.5, 1};
  const double se1 = verify::crps_mc(m, 1.0, {250'000, 42}).std_error;
  const double se4 = verify::crps_mc(m, 1.0, {1'000'000, 42}).std_error;
  const double ratio = se4 / se1;

  const bool ok = scale <= 1e-11 && min_value > 0.0 && drift == 0.0 && ratio >= 0.45 && ratio <= 0.55;
  return {ok, format("%zu cases: scale rel %.1e <= 1e-11, min crps %.3g > 0, two_e_xf drift %.1e, se ratio %.3f in [0.45, 0.55]",
                     grid.size(), scale, min_value, drift, ratio)};
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gbpcrps");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome determinism() {
  const std::vector<std::string> base{"verify", "table1", "--n", "1000000", "--seed", "42", "--format", "json"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run_cli(args);
  };
  const std::string a = with({"--workers", "1"});
  const std::string b = with({"--workers", "1"});
  const std::string c = with({"--workers", "4"});
  const std::string d = with({"--workers", "1", "--chunk", "65536"});
  const std::string e = with({"--workers", "3", "--chunk", "65536"});
  const bool ok = a == b && a == c && d == e && a.rfind("0\n", 0) == 0;
  return {ok, format("verify table1 --n 1000000 --seed 42: repeat %s, workers 1 vs 4 %s, chunked workers 1 vs 3 %s",
                     a == b ? "identical" : "DIFFERENT", a == c ? "identical" : "DIFFERENT",
                     d == e ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  const bool slow = argc > 1 && std::string(argv[1]) == "--slow";
  if (slow) {
    criterion("monte-carlo-slow", mc_slow);
  } else {
    criterion("table1-analytic", table1_analytic);
    criterion("quadrature-agreement", quadrature_agreement);
    criterion("monte-carlo", mc_fast);
    criterion("reduction-identities", reductions);
    criterion("special-functions", special_functions);
    criterion("structural-properties", structural);
    criterion("determinism", determinism);
  }
  std::printf("%s: %d failing\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
