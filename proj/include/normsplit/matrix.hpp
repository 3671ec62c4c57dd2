#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace normsplit {

/// Dense real matrix, immutable after construction.
///
/// Row indices run 0..rows()-1, column indices 0..cols()-1. All entries are
/// validated finite at construction. The rank is computed lazily by Gaussian
/// elimination with partial pivoting and cached; all other operations are
/// pure, so a Matrix may be shared freely across threads.
class Matrix {
 public:
  Matrix(int rows, int cols, std::vector<double> row_major_entries);
  Matrix(int rows, int cols, const std::function<double(int, int)>& entry);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix zero(int rows, int cols);

  Matrix(const Matrix& other);
  Matrix(Matrix&& other) noexcept;
  Matrix& operator=(const Matrix& other);
  Matrix& operator=(Matrix&& other) noexcept;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }
  std::vector<double> column(int j) const;
  const std::vector<double>& entries() const { return data_; }

  /// Largest |entry|; 0 only for the all-zero matrix.
  double max_abs() const;

  /// Numerical rank via pivoted elimination. Pivot tolerance is
  /// 1e-10 * max_abs() * max(rows, cols); cached after the first call.
  int rank() const;

  /// y = A x (x.size() == cols()).
  std::vector<double> apply(std::span<const double> x) const;

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  void validate() const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;  // row-major
  mutable std::atomic<int> rank_cache_{-1};
};

/// Submatrix formed by the given rows, original order preserved.
/// Throws std::invalid_argument on an empty set or out-of-range index.
Matrix submatrix(const Matrix& a, std::span<const int> row_indices);

/// Two-block split of the row index set {0,...,N-1}.
///
/// Canonical form: block1 always contains row 0 (the constructor swaps the
/// blocks if needed), which kills the block1/block2 symmetry and leaves
/// 2^(N-1) distinct partitions. block2 may be empty.
class Partition {
 public:
  /// Builds the partition {block, complement}; whichever side holds row 0
  /// becomes block1.
  Partition(int ambient_size, std::vector<int> block);

  /// Decodes a canonical index: bit (t-1) of `mask` set puts row t into
  /// block2, rows are 1..N-1; row 0 is always in block1. Requires N <= 64.
  static Partition from_mask(int ambient_size, std::uint64_t mask);

  const std::vector<int>& block1() const { return block1_; }
  const std::vector<int>& block2() const { return block2_; }
  int ambient_size() const { return ambient_; }

  /// Inverse of from_mask (requires N <= 64).
  std::uint64_t mask() const;

  bool operator==(const Partition& other) const {
    return ambient_ == other.ambient_ && block1_ == other.block1_;
  }

 private:
  int ambient_ = 0;
  std::vector<int> block1_;
  std::vector<int> block2_;
};

}  // namespace normsplit
