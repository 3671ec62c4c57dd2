#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normsplit/matrix.hpp"

namespace normsplit {

enum class ObjectiveKind {
  one_q_ratio,         // max_k ||A(block_k)||_(1,q) / ||A||_(1,q)
  pointwise_ratio,     // max_k sup_x ||A(block_k)x||_2 / ||Ax||_2  (q = 2 only)
  column_discrepancy,  // max_j |<w~_j, xi>| for the induced sign vector
  column_fraction,     // max_{j,k} (block k's share of column j's q-th power mass)
};

const char* objective_kind_name(ObjectiveKind kind);

struct PartitionResult {
  Partition partition;
  double objective = 0.0;
  ObjectiveKind kind = ObjectiveKind::one_q_ratio;
  double q = 0.0;
  std::string method;
  std::uint64_t partitions_examined = 0;
  std::uint64_t iterations = 0;
  /// balanced_column_partition only: whether the target was met.
  bool achieved = true;
};

/// Columns of |entries|^q: w~_j = (|a_j^1|^q, ..., |a_j^N|^q).
struct TildeColumns {
  std::vector<std::vector<double>> columns;  // [col][row]
};
TildeColumns tilde_columns(const Matrix& a, double q);

/// Recomputes the named objective for a stored partition. PartitionResult
/// objectives are reproducible: this returns the stored value exactly.
double evaluate_objective(const Matrix& a, const Partition& p, ObjectiveKind kind,
                          double q);

/// Scans all 2^(N-1) canonical partitions and returns the minimizer of the
/// objective (ties: smallest mask). Requires N <= 24; pointwise_ratio
/// requires q == 2 (the only exactly-evaluable case).
PartitionResult exhaustive_best_partition(const Matrix& a, double q,
                                          ObjectiveKind objective);

enum class SearchMode { exact, heuristic };

/// Sign-vector balancing of the q-th power columns: finds xi in {-1,+1}^N
/// minimizing D = max_j |<w~_j, xi>| (exact: enumeration with xi_0 = +1,
/// N <= 24; heuristic: greedy first-fit-decreasing assignment plus
/// single-flip local search). Returns the induced partition
/// (block1 = {i : xi_i = +1}) with the achieved D as objective.
PartitionResult sign_discrepancy_partition(const Matrix& a, double q, SearchMode mode);

/// Searches for a partition where, for every column j and both blocks,
/// the block's share of sum_i |a_j^i|^q is at most target_fraction.
/// Exhaustive for N <= 24, otherwise reuses the sign-discrepancy heuristic.
/// Returns the first satisfying partition in mask order, or the partition of
/// least violation with achieved = false. target_fraction must be >= 1/2.
PartitionResult balanced_column_partition(const Matrix& a, double q,
                                          double target_fraction);

/// Uniform draw over the 2^(N-1) - 1 canonical partitions with both blocks
/// nonempty; deterministic per seed. Throws for N < 2.
Partition random_partition(int ambient_size, std::uint64_t seed);

}  // namespace normsplit
