#pragma once

// Plain CSV persistence. Reals are written with 17 significant digits so
// that a write/read cycle reproduces every double exactly.

#include "hamred/integrator.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hamred::csv {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ContractViolation("csv: cannot parse '" + s + "' as a number");
  }
  require(used == s.size(), "csv: trailing characters in '" + s + "'");
  return v;
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

inline void write_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
  os << '\n';
}

inline void write_header(std::ostream& os, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
}

/// Header `t,<state names>,<audit names>`.
inline void write_trajectory(std::ostream& os, const Trajectory& tr) {
  tr.validate();
  std::vector<std::string> header{"t"};
  header.insert(header.end(), tr.state_names.begin(), tr.state_names.end());
  for (const auto& a : tr.audits) header.push_back(a.name);
  write_header(os, header);
  std::vector<double> row;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    row.assign(1, tr.times[i]);
    for (Eigen::Index j = 0; j < tr.states[i].size(); ++j) row.push_back(tr.states[i][j]);
    for (const auto& a : tr.audits) row.push_back(a.values[i]);
    write_row(os, row);
  }
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw UnknownName("csv: no column '" + name + "'");
  }
};

inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "csv: missing header");
  t.header = split_line(line);
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    require(cells.size() == t.header.size(), "csv: row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_real(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Inverse of write_trajectory given how many state columns follow `t`.
inline Trajectory read_trajectory(std::istream& is, std::size_t state_dim) {
  const Table t = read_table(is);
  require(!t.header.empty() && t.header[0] == "t", "csv: first column must be 't'");
  require(t.header.size() >= 1 + state_dim, "csv: too few columns for state dimension");
  Trajectory tr;
  tr.state_names.assign(t.header.begin() + 1, t.header.begin() + 1 + state_dim);
  for (std::size_t c = 1 + state_dim; c < t.header.size(); ++c) tr.audits.push_back({t.header[c], {}});
  for (const auto& row : t.rows) {
    tr.times.push_back(row[0]);
    Vector s(static_cast<Eigen::Index>(state_dim));
    for (std::size_t j = 0; j < state_dim; ++j) s[static_cast<Eigen::Index>(j)] = row[1 + j];
    tr.states.push_back(std::move(s));
    for (std::size_t c = 0; c < tr.audits.size(); ++c) tr.audits[c].values.push_back(row[1 + state_dim + c]);
  }
  tr.validate();
  return tr;
}

}  // namespace hamred::csv
