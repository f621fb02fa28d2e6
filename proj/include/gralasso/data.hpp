#pragma once
// DataMatrix and CSV interchange. The response is always column 0 internally;
// the original CSV position of every column is kept in `source_columns`.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gralasso/common.hpp"

namespace gralasso {

/// Raised for malformed input tables. Carries 1-based line and column positions.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error("data: " + what +
              (line ? " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                    : std::string())),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct DataMatrix {
  Matrix values;  // n x (p + 1), column 0 is the response
  std::vector<std::string> names;
  std::vector<std::size_t> source_columns;

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values.cols()) - 1; }
  auto response() const { return values.col(0); }
  auto predictors() const { return values.rightCols(values.cols() - 1); }
  std::span<const double> column(std::size_t j) const {
    return {values.col(static_cast<Eigen::Index>(j)).data(), n()};
  }

  static DataMatrix from_parts(const Vector& y, const Matrix& X, std::vector<std::string> names = {}) {
    if (y.size() != X.rows()) fail("data", "response length does not match predictor rows");
    DataMatrix d;
    d.values.resize(X.rows(), X.cols() + 1);
    d.values.col(0) = y;
    d.values.rightCols(X.cols()) = X;
    if (names.empty()) {
      names.emplace_back("y");
      for (Eigen::Index j = 0; j < X.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    }
    if (names.size() != static_cast<std::size_t>(d.values.cols())) fail("data", "name count mismatch");
    d.names = std::move(names);
    d.source_columns.resize(d.names.size());
    for (std::size_t j = 0; j < d.names.size(); ++j) d.source_columns[j] = j;
    return d;
  }

  /// Columns restricted to the response plus the given predictor indices (0-based predictors).
  DataMatrix select_predictors(const std::vector<std::size_t>& keep) const {
    DataMatrix d;
    d.values.resize(values.rows(), static_cast<Eigen::Index>(keep.size()) + 1);
    d.values.col(0) = values.col(0);
    d.names = {names[0]};
    d.source_columns = {source_columns[0]};
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const auto j = static_cast<Eigen::Index>(keep[k] + 1);
      d.values.col(static_cast<Eigen::Index>(k + 1)) = values.col(j);
      d.names.push_back(names[keep[k] + 1]);
      d.source_columns.push_back(source_columns[keep[k] + 1]);
    }
    return d;
  }
};

/// Shortest-safe text form: 17 significant digits, '.' decimal point regardless of locale.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      std::string_view field = trim(line.substr(start, i - start));
      if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
        field = field.substr(1, field.size() - 2);
      }
      out.push_back(field);
      start = i + 1;
    }
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace detail

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Reads a header + all-numeric CSV. '#'-prefixed lines and blank lines are skipped.
inline CsvTable read_numeric_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = detail::split_csv_line(view);
    if (!have_header) {
      for (auto f : fields) {
        if (f.empty()) throw DataError("empty column name in header", line_no, table.header.size() + 1);
        table.header.emplace_back(f);
      }
      table.columns.resize(table.header.size());
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("expected " + std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(fields.size()),
                      line_no, std::min(fields.size(), table.header.size()) + 1);
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (fields[j].empty()) throw DataError("missing value in column '" + table.header[j] + "'", line_no, j + 1);
      if (!detail::parse_double(fields[j], v) || !std::isfinite(v)) {
        throw DataError("non-numeric value '" + std::string(fields[j]) + "' in column '" + table.header[j] + "'",
                        line_no, j + 1);
      }
      table.columns[j].push_back(v);
    }
  }
  if (!have_header) throw DataError("input has no header row");
  return table;
}

inline DataMatrix to_data_matrix(const CsvTable& table, const std::string& response) {
  std::size_t resp = table.header.size();
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == response) resp = j;
  }
  if (resp == table.header.size()) throw DataError("unknown response column '" + response + "'");
  if (table.header.size() < 2) throw DataError("need at least one predictor column");
  const std::size_t n = table.columns.front().size();
  if (n == 0) throw DataError("input has no data rows");

  DataMatrix d;
  d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(table.header.size()));
  std::vector<std::size_t> order{resp};
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j != resp) order.push_back(j);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& col = table.columns[order[k]];
    for (std::size_t i = 0; i < n; ++i) d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
    d.names.push_back(table.header[order[k]]);
    d.source_columns.push_back(order[k]);
  }
  return d;
}

inline DataMatrix read_data_csv(const std::string& path, const std::string& response) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return to_data_matrix(read_numeric_csv(in), response);
}

inline void write_matrix_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& m) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

/// Writes the data in its internal order (response first).
inline void write_data_csv(std::ostream& out, const DataMatrix& d) { write_matrix_csv(out, d.names, d.values); }

}  // namespace gralasso
