#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "normsplit/matrix.hpp"

namespace normsplit {

enum class Exactness { exact, lower_bound };

/// Result of a norm computation: the value, whether it is exact or only a
/// certified lower bound, and a witness direction x approaching the value.
struct NormValue {
  double value = 0.0;
  Exactness exactness = Exactness::exact;
  std::vector<double> witness;
  /// Maximizing column (basis-attained norms) or row (row-sup norms); -1 otherwise.
  int witness_index = -1;
};

/// l_q norm of a vector, q in [1, inf] (pass q = infinity for the max norm).
double vector_norm(std::span<const double> v, double q);

/// Dual exponent p' with 1/p + 1/p' = 1 (1 <-> inf).
double dual_exponent(double p);

/// (1,q)-operator norm: attained at a standard basis vector, hence exactly
/// the maximal column q-norm. Ties resolve to the smallest column index.
NormValue one_q_norm(const Matrix& a, double q);

/// (p,inf)-operator norm = max_i of the dual p'-norm of row i.
NormValue p_infty_norm(const Matrix& a, double p);

/// Spectral norm, sqrt(lambda_max(A^T A)).
NormValue two_two_norm(const Matrix& a);

/// (inf,q)-operator norm by sign-vector enumeration (exact, requires cols <= 20).
NormValue infty_q_norm(const Matrix& a, double q);

/// Certified lower bound on the (p,q)-operator norm: best ratio
/// ||Ax||_q / ||x||_p over all +-e_j probes and `budget` seeded random
/// directions, each refined by projected subgradient ascent with
/// geometrically diminishing steps. Deterministic for a fixed seed.
NormValue pq_norm_lower_bound(const Matrix& a, double p, double q, int budget,
                              std::uint64_t seed);

/// Exact per-block image-norm ratios at q = 2:
/// r_k = sup_x ||A(block_k) x||_2 / ||A x||_2, via the generalized symmetric
/// eigenproblem projected onto the row space of A. r_k in [0,1].
struct PointwiseRatio {
  double r1 = 0.0;
  double r2 = 0.0;
  std::vector<double> witness1;
  std::vector<double> witness2;
};
PointwiseRatio pointwise_ratio_q2(const Matrix& a, const Partition& p);

}  // namespace normsplit
