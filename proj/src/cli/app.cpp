#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string_view>

#include <CLI11.hpp>

#include "gbpcrps/cli.hpp"
#include "gbpcrps/parallel.hpp"
#include "gbpcrps/verify.hpp"

namespace gbpcrps::cli {

namespace {

constexpr const char* kRtolEnv = "CRPS_SERIES_RTOL";

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  return Format::kText;
}

// Series control with rel_tol taken from CRPS_SERIES_RTOL when set.
specfun::SeriesControl series_from_env() {
  specfun::SeriesControl ctrl;
  const char* raw = std::getenv(kRtolEnv);
  if (raw == nullptr || *raw == '\0') return ctrl;
  const std::string_view s(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0) || !(v < 1.0)) {
    throw DomainError(std::string(kRtolEnv) + " must be a number in (0, 1), got '" + raw + "'");
  }
  ctrl.rel_tol = v;
  return ctrl;
}

struct CrpsArgs {
  double alpha = 0, beta = 0, p = 0, q = 0, y = 0;
  std::string input;
  std::string family = "auto";
  std::string format = "text";
  unsigned workers = default_workers();
};

struct VerifyArgs {
  std::size_t n = 1'000'000;
  std::size_t chunk = gbp::kDefaultChunk;
  std::uint64_t seed = 42;
  std::string estimator = "cdf";
  unsigned workers = default_workers();
  double tol = 1e-10;
  std::size_t quad_grid = 0;
  std::size_t grid = 200;
  std::string format = "text";
};

int cmd_crps(const CrpsArgs& a, bool single, std::ostream& out, std::ostream& err) {
  const Family family = parse_family(a.family);
  const specfun::SeriesControl series = series_from_env();
  std::vector<InputRow> rows;
  if (single) {
    rows.push_back({0, GbpParams{a.alpha, a.beta, a.p, a.q}, a.y});
  } else if (a.input == "-") {
    rows = parse_input(std::cin);
  } else {
    std::ifstream file(a.input);
    if (!file) {
      err << "error: cannot open '" << a.input << "'\n";
      return 1;
    }
    rows = parse_input(file);
  }
  const std::vector<ScoreRecord> records = score_batch(rows, family, series, a.workers);
  write_records(out, records, parse_format(a.format));
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].error.empty()) continue;
    if (!single) err << "line " << rows[i].line << ": ";
    err << records[i].error << '\n';
  }
  const bool failed =
      std::any_of(records.begin(), records.end(), [](const ScoreRecord& r) { return !r.error.empty(); });
  return failed ? 2 : 0;
}

template <class Report>
int emit(const Report& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << verify::to_json(report).dump(2) << '\n';
  } else {
    out << verify::to_text(report);
  }
  return report.passed() ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form CRPS for the generalized Beta-prime family and its special cases",
               "gbpcrps"};
  app.require_subcommand(1);

  CrpsArgs ca;
  auto* crps = app.add_subcommand("crps", "Score observations against GBP forecasts");
  auto* o_alpha = crps->add_option("--alpha", ca.alpha, "shape alpha > 0");
  auto* o_beta = crps->add_option("--beta", ca.beta, "shape beta > 0");
  auto* o_p = crps->add_option("--p", ca.p, "power p > 0");
  auto* o_q = crps->add_option("--q", ca.q, "scale q > 0");
  auto* o_y = crps->add_option("--y", ca.y, "observation");
  auto* o_input = crps->add_option("--input", ca.input, "CSV or JSON-lines file, '-' for stdin");
  crps->add_option("--family", ca.family, "formula to use")
      ->check(CLI::IsMember({"auto", "gbp", "sm", "dagum", "ll"}))
      ->capture_default_str();
  crps->add_option("--format", ca.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  crps->add_option("--workers", ca.workers, "scoring threads")->check(CLI::PositiveNumber);
  for (auto* o : {o_alpha, o_beta, o_p, o_q, o_y}) o->excludes(o_input);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check the closed forms against independent oracles");
  verify->require_subcommand(1);
  auto* table1 = verify->add_subcommand("table1", "Published verification table with Monte Carlo");
  table1->add_option("--n", va.n, "draws per row")->capture_default_str();
  table1->add_option("--seed", va.seed, "Monte Carlo seed")->capture_default_str();
  table1->add_option("--estimator", va.estimator, "cdf or energy")
      ->check(CLI::IsMember({"cdf", "energy"}))
      ->capture_default_str();
  table1->add_option("--workers", va.workers, "Monte Carlo threads")->check(CLI::PositiveNumber);
  table1->add_option("--chunk", va.chunk, "draws per deterministic chunk")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* quad = verify->add_subcommand("quad", "Closed form against direct quadrature");
  quad->add_option("--tol", va.tol, "quadrature tolerance")->capture_default_str();
  quad->add_option("--grid", va.quad_grid, "extra random cases")->capture_default_str();
  quad->add_option("--seed", va.seed, "grid seed")->capture_default_str();
  auto* reductions = verify->add_subcommand("reductions", "Special cases against the general formula");
  reductions->add_option("--grid", va.grid, "random cases per pair")->capture_default_str();
  reductions->add_option("--seed", va.seed, "grid seed")->capture_default_str();
  for (auto* sub : {table1, quad, reductions}) {
    sub->add_option("--format", va.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (crps->parsed()) {
      const bool single = o_input->count() == 0;
      if (single) {
        for (auto* o : {o_alpha, o_beta, o_p, o_q, o_y}) {
          if (o->count() == 0) {
            err << "error: " << o->get_name() << " is required without --input\n";
            return 1;
          }
        }
      }
      return cmd_crps(ca, single, out, err);
    }
    if (table1->parsed()) {
      return emit(verify::table1_report(va.n, va.seed, verify::parse_estimator(va.estimator),
                                        va.workers, va.chunk),
                  va.format, out);
    }
    if (quad->parsed()) {
      return emit(verify::quad_report({va.tol, va.tol}, va.quad_grid, va.seed), va.format, out);
    }
    if (reductions->parsed()) {
      return emit(verify::reduction_check(va.grid, va.seed), va.format, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace gbpcrps::cli
