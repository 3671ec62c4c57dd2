#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "normsplit/matrix.hpp"

namespace normsplit {

enum class MatrixFormat { csv, json };

MatrixFormat parse_matrix_format(std::string_view name);

/// Input errors carry the file, line and field of the offending token.
class MatrixIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV: one row per line, comma-separated decimals (scientific notation ok).
/// JSON: {"rows": N, "cols": n, "data": [row-major numbers]}.
Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
Matrix parse_matrix_csv(std::string_view text, const std::string& origin = "<string>");
Matrix parse_matrix_json(std::string_view text, const std::string& origin = "<string>");

void save_matrix(const Matrix& a, const std::filesystem::path& path, MatrixFormat format);

}  // namespace normsplit
