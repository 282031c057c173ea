#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "recoherence/version.hpp"

namespace recoherence {

// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error(where + ": bad number '" + std::string(s) + "'");
  return v;
}

struct TableMetadata {
  std::string tool = std::string("recoherence-lab ") + version();
  std::string config_json; // resolved run configuration, one line
  std::optional<std::uint64_t> seed;
  std::string rng; // generator name, set when seed is
};

// Column-oriented numeric table; the single exchange format between the
// tool, its tests, and downstream plotting.  Booleans ride along as 0/1.
struct Table {
  TableMetadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void check_rectangular() const {
    for (const auto& r : rows)
      if (r.size() != columns.size())
        throw std::runtime_error("Table: ragged row");
  }
};

// Layout: `# key value` metadata lines, then `# columns a,b,c`, then one
// comma-separated data row per line.  No timestamps; identical inputs
// must produce identical bytes.
inline void write_table_csv(std::ostream& os, const Table& t) {
  t.check_rectangular();
  os << "# tool " << t.meta.tool << "\n";
  if (!t.meta.config_json.empty()) os << "# config " << t.meta.config_json << "\n";
  if (t.meta.seed) {
    os << "# seed " << *t.meta.seed << "\n";
    os << "# rng " << t.meta.rng << "\n";
  }
  os << "# columns ";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) os << ',';
    os << t.columns[i];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << "\n";
  }
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

} // namespace detail

inline Table read_table_csv(std::istream& is) {
  Table t;
  std::string line;
  int lineno = 0;
  bool saw_columns = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "csv line " + std::to_string(lineno);
    if (line[0] == '#') {
      std::string_view rest(line);
      rest.remove_prefix(1);
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      const std::size_t sp = rest.find(' ');
      const std::string_view key = rest.substr(0, sp);
      std::string_view val =
          sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
      if (key == "tool") {
        t.meta.tool = std::string(val);
      } else if (key == "config") {
        t.meta.config_json = std::string(val);
      } else if (key == "seed") {
        std::uint64_t s = 0;
        auto res = std::from_chars(val.data(), val.data() + val.size(), s);
        if (res.ec != std::errc{})
          throw std::runtime_error(where + ": bad seed");
        t.meta.seed = s;
      } else if (key == "rng") {
        t.meta.rng = std::string(val);
      } else if (key == "columns") {
        for (auto c : detail::split(val, ','))
          t.columns.emplace_back(c);
        saw_columns = true;
      }
      // unknown metadata keys pass through silently
      continue;
    }
    if (!saw_columns)
      throw std::runtime_error(where + ": data before '# columns' header");
    std::vector<double> row;
    for (auto cell : detail::split(line, ','))
      row.push_back(parse_double(cell, where));
    if (row.size() != t.columns.size())
      throw std::runtime_error(where + ": expected " +
                               std::to_string(t.columns.size()) + " cells, got " +
                               std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  if (!saw_columns) throw std::runtime_error("csv: no '# columns' header found");
  return t;
}

inline nlohmann::json table_to_json(const Table& t) {
  t.check_rectangular();
  nlohmann::json j;
  j["meta"]["tool"] = t.meta.tool;
  if (!t.meta.config_json.empty())
    j["meta"]["config"] = nlohmann::json::parse(t.meta.config_json);
  if (t.meta.seed) {
    j["meta"]["seed"] = *t.meta.seed;
    j["meta"]["rng"] = t.meta.rng;
  }
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j;
}

inline void write_table_json(std::ostream& os, const Table& t) {
  os << table_to_json(t).dump() << "\n";
}

inline Table table_from_json(const nlohmann::json& j) {
  Table t;
  t.meta.tool = j.at("meta").value("tool", "");
  if (j.at("meta").contains("config"))
    t.meta.config_json = j.at("meta").at("config").dump();
  if (j.at("meta").contains("seed")) {
    t.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
    t.meta.rng = j.at("meta").value("rng", "");
  }
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  t.check_rectangular();
  return t;
}

inline Table read_table_json(std::istream& is) {
  nlohmann::json j;
  is >> j;
  return table_from_json(j);
}

inline Table read_table_auto(std::istream& is) {
  const int c = is.peek();
  if (c == '{') return read_table_json(is);
  return read_table_csv(is);
}

} // namespace recoherence
