#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace hilldro::cli {

// Shortest round-trip representation.
inline std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os_ << (i ? "," : "") << cols[i];
    }
    os_ << '\n';
  }

  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      os_ << (i ? "," : "") << fmt(vals[i]);
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw std::invalid_argument("CSV has no column '" + name + "'");
  }
};

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> r;
    while (std::getline(ss, cell, ',')) r.push_back(parse_double(cell));
    if (r.size() != t.columns.size()) {
      throw std::invalid_argument(path + ": ragged row");
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace hilldro::cli
