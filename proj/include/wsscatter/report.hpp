#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "wsscatter/diagnostics.hpp"

namespace wss {

inline constexpr int kFormatVersion = 1;

// numeric table; the first column is conventionally the time or radius
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  void add(std::vector<double> row);
  std::vector<double> column(const std::string& name) const;
};

// RFC 4180, CRLF line ends, shortest round-trip numbers. Any non-finite entry throws NumericalError before
// the file is touched.
void write_csv(const std::string& path, const Table& t);
std::string csv_text(const Table& t);
Table read_csv(const std::string& path);

// {"format_version": 1, "kind": kind, ...body}
void write_json(const std::string& path, const std::string& kind, nlohmann::json body);

nlohmann::json to_json(const DecayFit& f);
nlohmann::json to_json(const Verdict& v);
// verdicts.csv (name,status,value,comparison,lo,hi,note) and verdicts.json in dir
void write_verdicts(const std::string& dir, const std::vector<Verdict>& v);
// human-readable, one line per verdict
std::string verdict_summary(const std::vector<Verdict>& v);

}  // namespace wss
