#pragma once

#include <string>

#include "combss/types.hpp"

namespace combss {

/// Headerless numeric CSV, one row per line. Values are written with 17
/// significant digits so a write/read cycle reproduces doubles bit for bit.
Matrix read_csv_matrix(const std::string& path);
Vector read_csv_vector(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);
void write_csv_vector(const std::string& path, const Vector& v);

std::string format_double(double v);

}  // namespace combss
