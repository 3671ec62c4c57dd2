#include "normsplit/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace normsplit {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MatrixIoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view token, const std::string& origin, size_t line,
                    size_t field) {
  const std::string_view t = trim(token);
  const auto where = [&] {
    return origin + ": line " + std::to_string(line) + ", field " + std::to_string(field);
  };
  if (t.empty()) {
    throw MatrixIoError(where() + ": empty value");
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw MatrixIoError(where() + ": invalid number '" + std::string(t) + "'");
  }
  return value;
}

}  // namespace

MatrixFormat parse_matrix_format(std::string_view name) {
  if (name == "csv") {
    return MatrixFormat::csv;
  }
  if (name == "json") {
    return MatrixFormat::json;
  }
  throw MatrixIoError("unknown matrix format '" + std::string(name) +
                      "' (expected csv or json)");
}

Matrix parse_matrix_csv(std::string_view text, const std::string& origin) {
  std::vector<double> entries;
  int cols = -1;
  int rows = 0;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    int fields = 0;
    size_t fpos = 0;
    while (true) {
      const size_t comma = line.find(',', fpos);
      const std::string_view token =
          line.substr(fpos, comma == std::string_view::npos ? line.size() - fpos
                                                            : comma - fpos);
      entries.push_back(parse_number(token, origin, line_no, fields + 1));
      ++fields;
      if (comma == std::string_view::npos) {
        break;
      }
      fpos = comma + 1;
    }
    if (cols < 0) {
      cols = fields;
    } else if (fields != cols) {
      throw MatrixIoError(origin + ": line " + std::to_string(line_no) + ": expected " +
                          std::to_string(cols) + " fields, got " + std::to_string(fields));
    }
    ++rows;
  }
  if (rows == 0) {
    throw MatrixIoError(origin + ": no rows");
  }
  return Matrix(rows, cols, std::move(entries));
}

Matrix parse_matrix_json(std::string_view text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MatrixIoError(origin + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw MatrixIoError(origin + ": expected {\"rows\", \"cols\", \"data\"}");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() ||
      !j["data"].is_array()) {
    throw MatrixIoError(origin + ": rows/cols must be integers and data an array");
  }
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  const auto& data = j["data"];
  if (rows < 1 || cols < 1) {
    throw MatrixIoError(origin + ": dimensions must be positive");
  }
  if (static_cast<long long>(data.size()) != static_cast<long long>(rows) * cols) {
    throw MatrixIoError(origin + ": data length " + std::to_string(data.size()) +
                        " does not match rows*cols = " + std::to_string(rows * cols));
  }
  std::vector<double> entries;
  entries.reserve(data.size());
  for (size_t idx = 0; idx < data.size(); ++idx) {
    if (!data[idx].is_number()) {
      throw MatrixIoError(origin + ": data[" + std::to_string(idx) + "] is not a number");
    }
    entries.push_back(data[idx].get<double>());
  }
  return Matrix(rows, cols, std::move(entries));
}

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string text = read_file(path);
  switch (format) {
    case MatrixFormat::csv:
      return parse_matrix_csv(text, path.string());
    case MatrixFormat::json:
      return parse_matrix_json(text, path.string());
  }
  throw MatrixIoError("unknown format");
}

void save_matrix(const Matrix& a, const std::filesystem::path& path, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw MatrixIoError("cannot write '" + path.string() + "'");
  }
  if (format == MatrixFormat::csv) {
    char buf[64];
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
        out << buf << (j + 1 < a.cols() ? "," : "");
      }
      out << '\n';
    }
  } else {
    nlohmann::json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["data"] = a.entries();
    out << j.dump() << '\n';
  }
  if (!out) {
    throw MatrixIoError("write failed for '" + path.string() + "'");
  }
}

}  // namespace normsplit
