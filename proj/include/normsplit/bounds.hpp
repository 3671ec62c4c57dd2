#pragma once

namespace normsplit {

/// Shrink factor for the pointwise image-norm guarantee:
///   gamma = 2^(-1/q) + ((2 + 3*2^(-1/q)) / q) * (t * ln(6q / t^(1/3)))^(1/3)
/// with t = rank * eps^q. Valid (guarantee applies) only for 0 < t <= 1.
double gamma(double q, int rank, double eps);

/// Two-sided halving deviation: psi = 2^(q+1) * (t * ln(6q / t^(1/3)))^(1/3).
/// Meaningful only when psi < 1/2.
double psi(double q, int rank, double eps);

/// (1,q)-norm shrink factors under the entrywise condition:
///   bound_a = (1/2 + (3/2) eps^(q/3) ln^(1/3)(4n))^(1/q)
///   bound_b = (1/2 + (1/2) eps^q theta(N, n))^(1/q)
///   bound_c = ((1 + n eps^q) / 2)^(1/q)
/// Each is a guarantee only for 0 < eps < 1, and useful only when < 1.
double bound_a(double q, int n, double eps);
double bound_b(double q, int big_n, int n, double eps);
double bound_c(double q, int n, double eps);

/// Vector-balancing discrepancy budget theta = sqrt(N) * (1 + log(n/N + 1))^(1/2).
/// The log base is unspecified upstream; natural log is used throughout (the
/// conservative reading for n > N), isolated here.
double theta(int big_n, int n);

enum class EpsTag { row_condition, entry_condition };

/// Every closed-form bound evaluated at one (q, N, n, rank, eps) point,
/// with validity-domain flags. Values are always computed, even outside the
/// validity domain, so callers can chart where the guarantees expire.
struct BoundSet {
  double q = 0.0;
  int big_n = 0;
  int n = 0;
  int rank = 0;
  double eps = 0.0;
  EpsTag tag = EpsTag::row_condition;

  double gamma = 0.0;
  double psi = 0.0;
  double bound_a = 0.0;
  double bound_b = 0.0;
  double bound_c = 0.0;
  double theta = 0.0;

  bool gamma_valid = false;     // 0 < rank * eps^q <= 1
  bool psi_valid = false;       // same domain as gamma
  bool psi_meaningful = false;  // additionally psi < 1/2
  bool abc_valid = false;       // 0 < eps < 1
  bool bound_a_useful = false;  // value < 1
  bool bound_b_useful = false;
  bool bound_c_useful = false;
};

BoundSet evaluate_bounds(double q, int big_n, int n, int rank, double eps, EpsTag tag);

}  // namespace normsplit
