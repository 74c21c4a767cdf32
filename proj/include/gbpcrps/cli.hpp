#ifndef GBPCRPS_CLI_HPP
#define GBPCRPS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbpcrps/crps_closed.hpp"

namespace gbpcrps::cli {

enum class Family { kAuto, kGbp, kSinghMaddala, kDagum, kLogLogistic };

Family parse_family(const std::string& name);

// One input observation and its score. `crps` is set iff `error` is empty.
struct ScoreRecord {
  GbpParams params;
  double y = 0.0;
  std::optional<double> crps;
  std::string formula;
  std::vector<std::string> warnings;
  std::string error;
};

// Input row with the line it came from.
struct InputRow {
  std::size_t line = 0;
  GbpParams params;
  double y = 0.0;
};

// Malformed input; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// CSV with an alpha,beta,p,q,y header (any order, any case, extra columns
// ignored) or JSON lines with the same keys. Detected from the first
// non-blank character. Blank lines are skipped.
std::vector<InputRow> parse_input(std::istream& in);

// Scores one row. Errors are captured in the record.
ScoreRecord score(const GbpParams& params, double y, Family family, const CrpsOptions& opts);

// Scores rows on up to `workers` threads; output order equals input order.
std::vector<ScoreRecord> score_batch(const std::vector<InputRow>& rows, Family family,
                                     const specfun::SeriesControl& series, unsigned workers);

enum class Format { kText, kCsv, kJson };

void write_records(std::ostream& out, const std::vector<ScoreRecord>& records, Format format);

// Entry point of the command-line tool. Returns the process exit code:
// 0 success, 1 usage or parse error, 2 some row errored or a check failed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gbpcrps::cli

#endif  // GBPCRPS_CLI_HPP
