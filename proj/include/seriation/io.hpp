#ifndef SERIATION_IO_HPP
#define SERIATION_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seriation/core.hpp"

namespace seriation::io {

// Matrix text format: CSV, one row per line, '.' decimal point, no header,
// LF line endings. Ragged rows and non-finite values are rejected.

inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": cannot parse number '" +
                             std::string(field) + "'");
  }
  if (!std::isfinite(v)) {
    throw std::runtime_error("line " + std::to_string(line) + ": non-finite value");
  }
  return v;
}

inline Matrix read_matrix_csv(std::istream& in) {
  std::vector<double> data;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      data.push_back(parse_double(rest.substr(0, comma), line_no));
      ++cols;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (n_rows == 0) {
      n_cols = cols;
    } else if (cols != n_cols) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": ragged row (" +
                               std::to_string(cols) + " fields, expected " +
                               std::to_string(n_cols) + ")");
    }
    ++n_rows;
  }
  if (n_rows == 0) throw std::runtime_error("matrix CSV is empty");
  return Matrix(n_rows, n_cols, std::move(data));
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const Matrix& a) {
  std::string line;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) line += ',';
      line += format_double(a(i, j));
    }
    line += '\n';
    out << line;
  }
}

inline void write_matrix_csv(const std::string& path, const Matrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_matrix_csv(out, a);
  if (!out) throw std::runtime_error("write failed for " + path);
}

// Permutation text format: one 0-based image per line.

inline Permutation read_permutation(std::istream& in) {
  std::vector<std::size_t> mapping;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": bad permutation index '" +
                               line + "'");
    }
    mapping.push_back(v);
  }
  return Permutation(std::move(mapping));
}

inline Permutation read_permutation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_permutation(in);
}

inline void write_permutation(std::ostream& out, const Permutation& p) {
  for (std::size_t v : p.mapping()) out << v << '\n';
}

inline void write_permutation(const std::string& path, const Permutation& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_permutation(out, p);
}

}  // namespace seriation::io

#endif  // SERIATION_IO_HPP
