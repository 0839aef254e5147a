#include "combss/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace combss {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput(ErrorCode::Io, "cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw InvalidInput(ErrorCode::Io, "bad numeric cell '" + cell +
                                              "' in '" + path + "'");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput(ErrorCode::Io,
                         "ragged rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InvalidInput(ErrorCode::Io, "no data rows in '" + path + "'");
  }
  return rows;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

Vector read_csv_vector(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.front().size() != 1) {
    throw InvalidInput(ErrorCode::Io,
                       "'" + path + "' must have exactly one column");
  }
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = rows[i][0];
  }
  return v;
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput(ErrorCode::Io, "cannot write '" + path + "'");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_csv_vector(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput(ErrorCode::Io, "cannot write '" + path + "'");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << format_double(v(i)) << '\n';
  }
}

}  // namespace combss
