#pragma once

#include "normsplit/matrix.hpp"
#include "normsplit/verifiers.hpp"

namespace normsplit {

/// The extremal subset family over {0,...,2k-1}: one representative per
/// complementary pair {S, complement}, the larger of the two (ties: the
/// lexicographically smaller index sequence). Ordered by decreasing
/// cardinality, then lexicographically.
struct SubsetFamily {
  int k = 0;
  int big_n = 0;  // 2k
  int n = 0;      // 2^(2k-1)
  std::vector<std::vector<int>> subsets;  // B_j, sorted 0-based row indices
};

SubsetFamily theorem4_family(int k);

/// The 2k x 2^(2k-1) matrix with a_j^i = |B_j|^(-1/q) for i in B_j, else 0.
/// Every column has unit q-norm; the minimal entrywise eps is
/// (min_j |B_j|)^(-1/q). Guarded to k <= 6.
Matrix theorem4_matrix(int k, double q);

/// Checks, for every canonical partition of {0,...,2k-1}, that
/// max_k ||A(block_k)||_(1,q) equals ||A||_(1,q) exactly. Comparisons are
/// done on q-th powers as integer ratios |block ∩ B_j| / |B_j|, so the check
/// carries zero floating-point tolerance. Requires k <= 4.
VerificationReport verify_theorem4(int k, double q);

}  // namespace normsplit
