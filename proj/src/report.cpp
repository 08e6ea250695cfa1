#include "wsscatter/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wsscatter/grid.hpp"

namespace wss {

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw ShapeError("table row has " + std::to_string(row.size()) + " cells, expected " +
                                                     std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) {
      std::vector<double> out;
      for (const auto& r : rows) out.push_back(r[c]);
      return out;
    }
  throw DomainError("no column '" + name + "'");
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// shortest representation that reads back to the same double
std::string fmt(double x) {
  char b[32];
  auto r = std::to_chars(b, b + sizeof b, x);
  return std::string(b, r.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// RFC 4180 record splitter
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> recs;
  std::vector<std::string> rec;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(cell);
      cell.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        rec.push_back(cell);
        recs.push_back(rec);
      }
      rec.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw DomainError("csv: unterminated quoted field");
  if (any || !cell.empty()) {
    rec.push_back(cell);
    recs.push_back(rec);
  }
  return recs;
}

}  // namespace

std::string csv_text(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "," : "") + quote(t.columns[c]);
  s += "\r\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (!std::isfinite(r[c]))
        throw NumericalError("non-finite value in column '" + t.columns[c] + "'");
      s += (c ? "," : "") + fmt(r[c]);
    }
    s += "\r\n";
  }
  return s;
}

void write_csv(const std::string& path, const Table& t) { write_text(path, csv_text(t)); }

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto recs = parse_csv(buf.str());
  if (recs.empty()) throw DomainError("csv: empty file " + path);
  Table t;
  t.columns = recs[0];
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].size() != t.columns.size())
      throw DomainError("csv: record " + std::to_string(i + 1) + " has " + std::to_string(recs[i].size()) + " fields");
    std::vector<double> row;
    for (const auto& c : recs[i]) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size()) throw DomainError("csv: record " + std::to_string(i + 1) + ": '" + c + "' is not a number");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(const std::string& path, const std::string& kind, nlohmann::json body) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json to_json(const DecayFit& f) {
  nlohmann::json j{{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"r_squared", f.r_squared},
                   {"t_lo", f.t_lo},         {"t_hi", f.t_hi},           {"points", f.points}};
  if (!f.warning.empty()) j["warning"] = f.warning;
  return j;
}

nlohmann::json to_json(const Verdict& v) { return nlohmann::json::parse(verdicts_json({v}))[0]; }

void write_verdicts(const std::string& dir, const std::vector<Verdict>& v) {
  std::string s = "name,status,value,comparison,lo,hi,note\r\n";
  for (const auto& x : v) {
    const bool num = std::isfinite(x.value);
    s += quote(x.name) + "," + x.status + "," + (num ? fmt(x.value) : "") + "," + quote(x.comparison) + "," +
         (x.comparison.empty() ? "" : fmt(x.lo)) + "," + (x.comparison == "in" ? fmt(x.hi) : "") + "," +
         quote(x.note) + "\r\n";
  }
  write_text(dir + "/verdicts.csv", s);
  write_json(dir + "/verdicts.json", "verdicts", {{"verdicts", nlohmann::json::parse(verdicts_json(v))}});
}

std::string verdict_summary(const std::vector<Verdict>& v) {
  std::ostringstream o;
  for (const auto& x : v) {
    std::string st = x.status == "pass" ? "PASS" : x.status == "fail" ? "FAIL" : "SKIP";
    o << st << "  " << x.name;
    if (x.status != "skip") {
      o << "  " << fmt(x.value) << " " << x.comparison << " ";
      if (x.comparison == "in") o << "[" << fmt(x.lo) << ", " << fmt(x.hi) << "]";
      else o << fmt(x.lo);
    }
    if (!x.note.empty()) o << "  (" << x.note << ")";
    o << "\n";
  }
  return o.str();
}

}  // namespace wss
