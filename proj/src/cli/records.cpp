#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "gbpcrps/cli.hpp"
#include "gbpcrps/parallel.hpp"

namespace gbpcrps::cli {

namespace {

constexpr const char* kKeys[] = {"alpha", "beta", "p", "q", "y"};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool blank(const std::string& s) { return trim(s).empty(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "column '" + column + "': not a number: '" + text + "'");
  }
  return v;
}

InputRow make_row(std::size_t line, const std::array<double, 5>& v) {
  return InputRow{line, GbpParams{v[0], v[1], v[2], v[3]}, v[4]};
}

std::vector<InputRow> parse_csv(const std::vector<std::string>& lines, std::size_t first) {
  const std::vector<std::string> header = split_csv(lines[first]);
  std::array<std::size_t, 5> column{};
  for (std::size_t k = 0; k < 5; ++k) {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) != kKeys[k]) continue;
      if (found != header.size()) {
        throw ParseError(first + 1, std::string("duplicate column '") + kKeys[k] + "'");
      }
      found = i;
    }
    if (found == header.size()) {
      throw ParseError(first + 1, std::string("header is missing column '") + kKeys[k] + "'");
    }
    column[k] = found;
  }

  std::vector<InputRow> rows;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::vector<std::string> fields = split_csv(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError(i + 1, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) v[k] = parse_number(fields[column[k]], i + 1, kKeys[k]);
    rows.push_back(make_row(i + 1, v));
  }
  return rows;
}

std::vector<InputRow> parse_jsonl(const std::vector<std::string>& lines) {
  std::vector<InputRow> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(i + 1, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(i + 1, "expected a JSON object");
    std::map<std::string, const nlohmann::json*> fields;
    for (const auto& [key, value] : j.items()) fields[lower(key)] = &value;
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) {
      const auto it = fields.find(kKeys[k]);
      if (it == fields.end()) throw ParseError(i + 1, std::string("missing key '") + kKeys[k] + "'");
      if (!it->second->is_number()) {
        throw ParseError(i + 1, std::string("key '") + kKeys[k] + "' is not a number");
      }
      v[k] = it->second->get<double>();
    }
    rows.push_back(make_row(i + 1, v));
  }
  return rows;
}

void require_shape(bool ok, const char* family, const char* need) {
  if (!ok) throw DomainError(std::string("family ") + family + " needs " + need);
}

CrpsBreakdown by_family(const GbpParams& m, double y, Family family, const CrpsOptions& opts) {
  switch (family) {
    case Family::kAuto:
      return crps_auto(m, y, opts);
    case Family::kGbp:
      return crps_gbp(m, y, opts);
    case Family::kSinghMaddala:
      require_shape(m.alpha == 1.0, "sm", "alpha = 1");
      return crps_singh_maddala(m.beta, m.p, m.q, y, opts);
    case Family::kDagum:
      require_shape(m.beta == 1.0, "dagum", "beta = 1");
      return crps_dagum(m.alpha, m.p, m.q, y, opts);
    case Family::kLogLogistic:
      require_shape(m.alpha == 1.0 && m.beta == 1.0, "ll", "alpha = beta = 1");
      return crps_log_logistic(m.p, m.q, y, opts);
  }
  throw DomainError("unknown family");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_num(double v) { return std::isfinite(v) ? num(v) : "null"; }

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Family parse_family(const std::string& name) {
  const std::string n = lower(name);
  if (n == "auto") return Family::kAuto;
  if (n == "gbp") return Family::kGbp;
  if (n == "sm" || n == "singh-maddala") return Family::kSinghMaddala;
  if (n == "dagum") return Family::kDagum;
  if (n == "ll" || n == "log-logistic") return Family::kLogLogistic;
  throw DomainError("unknown family '" + name + "'");
}

std::vector<InputRow> parse_input(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::size_t first = 0;
  while (first < lines.size() && blank(lines[first])) ++first;
  if (first == lines.size()) return {};
  if (trim(lines[first]).front() == '{') return parse_jsonl(lines);
  return parse_csv(lines, first);
}

ScoreRecord score(const GbpParams& params, double y, Family family, const CrpsOptions& opts) {
  ScoreRecord r;
  r.params = params;
  r.y = y;
  try {
    if (!std::isfinite(y)) throw DomainError("observation must be finite");
    CrpsBreakdown b;
    if (y < 0.0 && family != Family::kAuto) {
      b = by_family(params, 0.0, family, opts);
      b.crps += -y;
      b.warnings.extended = true;
    } else {
      b = by_family(params, y, family, opts);
    }
    if (!std::isfinite(b.crps)) throw ConvergenceError("non-finite score");
    r.crps = b.crps;
    r.formula = std::string(to_string(b.formula));
    r.warnings = b.warnings.names();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<ScoreRecord> score_batch(const std::vector<InputRow>& rows, Family family,
                                     const specfun::SeriesControl& series, unsigned workers) {
  ConstantTermCache cache;
  const CrpsOptions opts{series, &cache};
  std::vector<ScoreRecord> out(rows.size());
  parallel_for(rows.size(), workers,
               [&](std::size_t i) { out[i] = score(rows[i].params, rows[i].y, family, opts); });
  return out;
}

void write_records(std::ostream& out, const std::vector<ScoreRecord>& records, Format format) {
  char buf[256];
  switch (format) {
    case Format::kText:
      std::snprintf(buf, sizeof buf, "%10s %10s %10s %10s %12s %12s  %-14s %s\n", "alpha", "beta",
                    "p", "q", "y", "crps", "formula", "warnings");
      out << buf;
      for (const ScoreRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%10.6g %10.6g %10.6g %10.6g %12.6g ", r.params.alpha,
                      r.params.beta, r.params.p, r.params.q, r.y);
        out << buf;
        if (!r.error.empty()) {
          out << "error: " << r.error << '\n';
          continue;
        }
        std::snprintf(buf, sizeof buf, "%12.6f  %-14s %s\n", *r.crps, r.formula.c_str(),
                      join(r.warnings, ',').c_str());
        out << buf;
      }
      break;
    case Format::kCsv:
      out << "alpha,beta,p,q,y,crps,formula,warnings,error\n";
      for (const ScoreRecord& r : records) {
        out << num(r.params.alpha) << ',' << num(r.params.beta) << ',' << num(r.params.p) << ','
            << num(r.params.q) << ',' << num(r.y) << ',' << (r.crps ? num(*r.crps) : "") << ','
            << r.formula << ',' << join(r.warnings, ';') << ',' << csv_field(r.error) << '\n';
      }
      break;
    case Format::kJson:
      for (const ScoreRecord& r : records) {
        out << "{\"alpha\":" << json_num(r.params.alpha) << ",\"beta\":" << json_num(r.params.beta)
            << ",\"p\":" << json_num(r.params.p) << ",\"q\":" << json_num(r.params.q)
            << ",\"y\":" << json_num(r.y);
        if (r.crps) {
          out << ",\"crps\":" << json_num(*r.crps)
              << ",\"formula\":" << nlohmann::json(r.formula).dump()
              << ",\"warnings\":" << nlohmann::json(r.warnings).dump();
        } else {
          out << ",\"error\":" << nlohmann::json(r.error).dump();
        }
        out << "}\n";
      }
      break;
  }
}

}  // namespace gbpcrps::cli
