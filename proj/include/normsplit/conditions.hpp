#pragma once

#include <cstdint>
#include <vector>

#include "normsplit/matrix.hpp"

namespace normsplit {

struct SolverDiagnostics {
  std::int64_t iterations = 0;
  double final_gap = 0.0;  // last relative objective change (worst over rows)
};

struct RowEpsOptions {
  /// q == 2 only: return the closed-form value (pseudo-inverse route) instead
  /// of the subgradient-solver value.
  bool use_closed_form = true;
  /// q == 2 only: run both routes and require agreement within 1e-6.
  bool cross_check = true;
  int restarts = 10;
  int max_iterations = 5000;
  double relative_tolerance = 1e-9;
  std::uint64_t seed = 0x243f6a8885a308d3ull;
};

struct RowEpsDetail {
  double eps = 0.0;
  double solver_eps = 0.0;
  double closed_form_eps = 0.0;  // NaN unless q == 2
  SolverDiagnostics diagnostics;
};

/// Minimal admissible epsilons for the two matrix conditions at a given q:
/// the row condition (no row's contribution |(v_i,x)| may exceed an
/// eps-fraction of the image q-norm, for all x) and the entrywise condition
/// (no entry may exceed an eps-fraction of its column q-norm).
struct ConditionReport {
  double q = 0.0;
  std::vector<double> per_row_eps;                 // row condition, per row
  std::vector<std::vector<double>> per_entry_eps;  // entrywise, [row][col]
  double eps_row_min = 0.0;    // max of per_row_eps: least eps valid for all rows
  double eps_entry_min = 0.0;  // max of per_entry_eps: least eps valid entrywise
  SolverDiagnostics diagnostics;
};

/// Entrywise condition: per_entry_eps[i][j] = |a_ij| / ||w_j||_q.
/// Throws std::invalid_argument naming the column if some column is all zero.
ConditionReport entry_condition_eps(const Matrix& a, double q);

/// Row condition for one row: sup_x |(v_row, x)| / (sum_i |(v_i,x)|^q)^(1/q),
/// computed as 1 / min{ ||Ax||_q : (v_row, x) = 1 } in row-space coordinates.
/// Returns 0 for a zero row. Always in [0, 1].
double row_condition_eps(const Matrix& a, double q, int row,
                         const RowEpsOptions& options = {});
RowEpsDetail row_condition_eps_detail(const Matrix& a, double q, int row,
                                      const RowEpsOptions& options = {});

/// Row condition over every row; eps_row_min is the least eps for which the
/// condition holds for all x and all rows.
ConditionReport full_row_report(const Matrix& a, double q,
                                const RowEpsOptions& options = {});

}  // namespace normsplit
