#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "umean/errors.hpp"

namespace umean {

struct Dataset {
  std::string column;  // header name, or "value" when the file has none
  std::vector<double> values;
  std::string provenance;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t' || *b == '\r')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && b < e;
}

}  // namespace detail

/// Single-column CSV, optional header row; decimal points only, independent
/// of the process locale.
inline Dataset read_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  Dataset ds;
  ds.column = "value";
  ds.provenance = path;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    double v;
    if (detail::parse_double(line, v)) {
      ds.values.push_back(v);
    } else if (first) {
      // header row
      ds.column = line;
      while (!ds.column.empty() && (ds.column.back() == '\r' || ds.column.back() == ' '))
        ds.column.pop_back();
    } else {
      throw ValidationError(path + ": cannot parse line " + std::to_string(lineno));
    }
    first = false;
  }
  if (ds.values.empty()) throw ValidationError(path + ": no data rows");
  return ds;
}

inline void write_column_csv(std::ostream& os, const std::string& column,
                             const std::vector<double>& values) {
  os.precision(17);
  os << column << '\n';
  for (double v : values) os << v << '\n';
}

inline void write_column_csv(const std::string& path, const std::string& column,
                             const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_column_csv(out, column, values);
}

}  // namespace umean
