#include "sst/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sst/error.hpp"

namespace sst {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& field, int row) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument,
                "row " + std::to_string(row + 1) + ": cannot parse '" + t + "'");
  }
  return v;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      row.push_back(parse_double(field, static_cast<int>(rows.size())));
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty matrix file");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "matrix is not square: row " + std::to_string(i + 1) +
                      " has " + std::to_string(rows[i].size()) + " fields, expected " +
                      std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  return read_matrix_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  write_matrix_csv(out, m);
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const std::string t = trim(field);
    int v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot parse integer list '" + text + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace sst
