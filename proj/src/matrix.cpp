#include "normsplit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace normsplit {

Matrix::Matrix(int rows, int cols, std::vector<double> row_major_entries)
    : rows_(rows), cols_(cols), data_(std::move(row_major_entries)) {
  if (data_.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw std::invalid_argument("matrix: entry count " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  validate();
}

Matrix::Matrix(int rows, int cols, const std::function<double(int, int)>& entry)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("matrix: dimensions must be positive");
  }
  data_.resize(static_cast<size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      data_[static_cast<size_t>(i) * cols + j] = entry(i, j);
    }
  }
  validate();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<size_t>(rows_) * std::max(cols_, 0));
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("matrix: ragged initializer rows");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  validate();
}

Matrix Matrix::identity(int n) {
  return Matrix(n, n, [](int i, int j) { return i == j ? 1.0 : 0.0; });
}

Matrix Matrix::zero(int rows, int cols) {
  return Matrix(rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0));
}

Matrix::Matrix(const Matrix& other)
    : rows_(other.rows_), cols_(other.cols_), data_(other.data_) {
  rank_cache_.store(other.rank_cache_.load(std::memory_order_relaxed),
                    std::memory_order_relaxed);
}

Matrix::Matrix(Matrix&& other) noexcept
    : rows_(other.rows_), cols_(other.cols_), data_(std::move(other.data_)) {
  rank_cache_.store(other.rank_cache_.load(std::memory_order_relaxed),
                    std::memory_order_relaxed);
}

Matrix& Matrix::operator=(const Matrix& other) {
  if (this != &other) {
    rows_ = other.rows_;
    cols_ = other.cols_;
    data_ = other.data_;
    rank_cache_.store(other.rank_cache_.load(std::memory_order_relaxed),
                      std::memory_order_relaxed);
  }
  return *this;
}

Matrix& Matrix::operator=(Matrix&& other) noexcept {
  if (this != &other) {
    rows_ = other.rows_;
    cols_ = other.cols_;
    data_ = std::move(other.data_);
    rank_cache_.store(other.rank_cache_.load(std::memory_order_relaxed),
                      std::memory_order_relaxed);
  }
  return *this;
}

void Matrix::validate() const {
  if (rows_ < 1 || cols_ < 1) {
    throw std::invalid_argument("matrix: dimensions must be positive");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("matrix: entries must be finite");
    }
  }
}

std::vector<double> Matrix::column(int j) const {
  std::vector<double> col(rows_);
  for (int i = 0; i < rows_; ++i) {
    col[i] = (*this)(i, j);
  }
  return col;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

int Matrix::rank() const {
  int cached = rank_cache_.load(std::memory_order_relaxed);
  if (cached >= 0) {
    return cached;
  }
  // Gaussian elimination with partial pivoting on a working copy.
  const double tol = 1e-10 * max_abs() * std::max(rows_, cols_);
  std::vector<double> work = data_;
  auto at = [&](int i, int j) -> double& { return work[static_cast<size_t>(i) * cols_ + j]; };

  int rank = 0;
  int pivot_row = 0;
  for (int col = 0; col < cols_ && pivot_row < rows_; ++col) {
    int best = pivot_row;
    for (int i = pivot_row + 1; i < rows_; ++i) {
      if (std::abs(at(i, col)) > std::abs(at(best, col))) {
        best = i;
      }
    }
    if (std::abs(at(best, col)) <= tol) {
      continue;
    }
    if (best != pivot_row) {
      for (int j = col; j < cols_; ++j) {
        std::swap(at(best, j), at(pivot_row, j));
      }
    }
    const double pivot = at(pivot_row, col);
    for (int i = pivot_row + 1; i < rows_; ++i) {
      const double factor = at(i, col) / pivot;
      at(i, col) = 0.0;
      for (int j = col + 1; j < cols_; ++j) {
        at(i, j) -= factor * at(pivot_row, j);
      }
    }
    ++rank;
    ++pivot_row;
  }
  rank_cache_.store(rank, std::memory_order_relaxed);
  return rank;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) {
    throw std::invalid_argument("matrix apply: size mismatch");
  }
  std::vector<double> y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* r = data_.data() + static_cast<size_t>(i) * cols_;
    double acc = 0.0;
    for (int j = 0; j < cols_; ++j) {
      acc += r[j] * x[j];
    }
    y[i] = acc;
  }
  return y;
}

Matrix submatrix(const Matrix& a, std::span<const int> row_indices) {
  if (row_indices.empty()) {
    throw std::invalid_argument("empty submatrix");
  }
  for (int i : row_indices) {
    if (i < 0 || i >= a.rows()) {
      throw std::invalid_argument("submatrix: row index " + std::to_string(i) +
                                  " out of range [0," + std::to_string(a.rows()) + ")");
    }
  }
  std::vector<double> entries;
  entries.reserve(row_indices.size() * static_cast<size_t>(a.cols()));
  for (int i : row_indices) {
    auto r = a.row(i);
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Matrix(static_cast<int>(row_indices.size()), a.cols(), std::move(entries));
}

Partition::Partition(int ambient_size, std::vector<int> block) : ambient_(ambient_size) {
  if (ambient_size < 1) {
    throw std::invalid_argument("partition: ambient size must be positive");
  }
  std::vector<char> in_block(static_cast<size_t>(ambient_size), 0);
  for (int i : block) {
    if (i < 0 || i >= ambient_size) {
      throw std::invalid_argument("partition: row index out of range");
    }
    if (in_block[i]) {
      throw std::invalid_argument("partition: duplicate row index");
    }
    in_block[i] = 1;
  }
  std::vector<int> inside;
  std::vector<int> outside;
  for (int i = 0; i < ambient_size; ++i) {
    (in_block[i] ? inside : outside).push_back(i);
  }
  // Canonical form: the block holding row 0 is block1.
  if (!inside.empty() && inside.front() == 0) {
    block1_ = std::move(inside);
    block2_ = std::move(outside);
  } else {
    block1_ = std::move(outside);
    block2_ = std::move(inside);
  }
}

Partition Partition::from_mask(int ambient_size, std::uint64_t mask) {
  if (ambient_size < 1 || ambient_size > 64) {
    throw std::invalid_argument("partition mask: ambient size must be in [1,64]");
  }
  if (ambient_size < 64 && (mask >> (ambient_size - 1)) != 0) {
    throw std::invalid_argument("partition mask: bits beyond ambient size");
  }
  std::vector<int> block2;
  for (int t = 1; t < ambient_size; ++t) {
    if ((mask >> (t - 1)) & 1u) {
      block2.push_back(t);
    }
  }
  return Partition(ambient_size, std::move(block2));
}

std::uint64_t Partition::mask() const {
  if (ambient_ > 64) {
    throw std::invalid_argument("partition mask: ambient size exceeds 64");
  }
  std::uint64_t m = 0;
  for (int t : block2_) {
    m |= std::uint64_t{1} << (t - 1);
  }
  return m;
}

}  // namespace normsplit
