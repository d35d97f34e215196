#pragma once

// CSV readers and writers for grid functions and verification reports.
// Output is byte-deterministic: %.17g numbers, LF line endings, no clocks.

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/io.hpp"
#include "fractalcalc/staircase_coords.hpp"
#include "fractalcalc/verification.hpp"

namespace fractalcalc {

inline void write_grid_csv(std::ostream& out, const GridFunction& g, const std::string& value = "g") {
  out << "u," << value << '\n';
  for (std::size_t j = 0; j < g.size(); ++j)
    out << fmt17(g.u(j)) << ',' << fmt17(g[j]) << '\n';
}

/// Reads a `u,g` CSV with a header row; the u column must be equispaced.
inline GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw GridError("read_grid_csv: empty input");
  std::vector<double> u, g;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw GridError("read_grid_csv: expected two columns");
    u.push_back(parse_number(line.substr(0, comma)));
    g.push_back(parse_number(line.substr(comma + 1)));
  }
  if (u.size() < 2)
    throw GridError("read_grid_csv: need at least 2 rows");
  const double du = (u.back() - u.front()) / static_cast<double>(u.size() - 1);
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(u[j] - (u.front() + static_cast<double>(j) * du)) >
        1e-9 * std::max(1.0, std::abs(u.back())))
      throw GridError("read_grid_csv: u column is not equispaced");
  return GridFunction(u.front(), du, std::move(g));
}

inline void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
  out << "row,column,beta,m,max_rel_err,status\n";
  for (const auto& r : rows)
    out << r.row << ',' << r.column << ',' << fmt17(r.beta) << ',' << r.m << ','
        << fmt17(r.max_rel_err) << ',' << r.status << '\n';
}

inline std::string params_json(const std::vector<Param>& params) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& p : params)
    j[p.key] = p.value;
  return j.dump();
}

// Quotes a field when it contains a comma or a quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"')
      q += '"';
    q += c;
  }
  return q + '"';
}

inline void write_checks_csv(std::ostream& out, const std::vector<CheckRecord>& checks) {
  out << "identity,param_json,sigma_or_us,lhs,rhs,rel_err,status,erratum_variant_err\n";
  for (const auto& c : checks) {
    out << csv_field(c.identity) << ',' << csv_field(params_json(c.params)) << ','
        << fmt17(c.x) << ',' << fmt17(c.lhs) << ',' << fmt17(c.rhs) << ',' << fmt17(c.rel_err)
        << ',' << c.status << ',';
    if (c.erratum_err)
      out << fmt17(*c.erratum_err);
    out << '\n';
  }
}

} // namespace fractalcalc
