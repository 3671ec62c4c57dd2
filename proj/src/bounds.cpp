#include "normsplit/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace normsplit {

namespace {

void check_common(double q, double eps, bool positive_eps) {
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
    throw std::invalid_argument("bounds: q must be in [1,inf)");
  }
  if (std::isnan(eps) || eps < 0.0 || (positive_eps && eps == 0.0)) {
    throw std::invalid_argument("bounds: eps must be positive");
  }
}

/// t * ln(6q / t^(1/3)); the shared core of gamma and psi.
double log_core(double q, double t) {
  if (t == 0.0) {
    return 0.0;
  }
  return t * (std::log(6.0 * q) - std::log(t) / 3.0);
}

}  // namespace

double gamma(double q, int rank, double eps) {
  check_common(q, eps, /*positive_eps=*/true);
  if (rank < 1) {
    throw std::invalid_argument("gamma: rank must be >= 1");
  }
  const double t = rank * std::pow(eps, q);
  const double base = std::pow(2.0, -1.0 / q);
  return base + (2.0 + 3.0 * base) / q * std::cbrt(log_core(q, t));
}

double psi(double q, int rank, double eps) {
  check_common(q, eps, /*positive_eps=*/true);
  if (rank < 1) {
    throw std::invalid_argument("psi: rank must be >= 1");
  }
  const double t = rank * std::pow(eps, q);
  return std::pow(2.0, q + 1.0) * std::cbrt(log_core(q, t));
}

double bound_a(double q, int n, double eps) {
  check_common(q, eps, /*positive_eps=*/false);
  if (n < 1) {
    throw std::invalid_argument("bound_a: n must be >= 1");
  }
  return std::pow(0.5 + 1.5 * std::pow(eps, q / 3.0) * std::cbrt(std::log(4.0 * n)),
                  1.0 / q);
}

double bound_b(double q, int big_n, int n, double eps) {
  check_common(q, eps, /*positive_eps=*/false);
  return std::pow(0.5 + 0.5 * std::pow(eps, q) * theta(big_n, n), 1.0 / q);
}

double bound_c(double q, int n, double eps) {
  check_common(q, eps, /*positive_eps=*/false);
  if (n < 1) {
    throw std::invalid_argument("bound_c: n must be >= 1");
  }
  return std::pow((1.0 + n * std::pow(eps, q)) / 2.0, 1.0 / q);
}

double theta(int big_n, int n) {
  if (big_n < 1 || n < 1) {
    throw std::invalid_argument("theta: dimensions must be >= 1");
  }
  return std::sqrt(static_cast<double>(big_n)) *
         std::sqrt(1.0 + std::log(static_cast<double>(n) / big_n + 1.0));
}

BoundSet evaluate_bounds(double q, int big_n, int n, int rank, double eps, EpsTag tag) {
  check_common(q, eps, /*positive_eps=*/false);
  if (big_n < 1 || n < 1 || rank < 0) {
    throw std::invalid_argument("evaluate_bounds: bad dimensions");
  }
  BoundSet s;
  s.q = q;
  s.big_n = big_n;
  s.n = n;
  s.rank = rank;
  s.eps = eps;
  s.tag = tag;

  const int r = std::max(rank, 1);
  const double t = r * std::pow(eps, q);
  s.gamma = eps > 0.0 ? gamma(q, r, eps) : std::pow(2.0, -1.0 / q);
  s.psi = eps > 0.0 ? psi(q, r, eps) : 0.0;
  s.theta = theta(big_n, n);
  s.bound_a = bound_a(q, n, eps);
  s.bound_b = bound_b(q, big_n, n, eps);
  s.bound_c = bound_c(q, n, eps);

  s.gamma_valid = eps > 0.0 && rank >= 1 && t <= 1.0;
  s.psi_valid = s.gamma_valid;
  s.psi_meaningful = s.psi_valid && s.psi < 0.5;
  s.abc_valid = eps > 0.0 && eps < 1.0;
  s.bound_a_useful = s.abc_valid && s.bound_a < 1.0;
  s.bound_b_useful = s.abc_valid && s.bound_b < 1.0;
  s.bound_c_useful = s.abc_valid && s.bound_c < 1.0;
  return s;
}

}  // namespace normsplit
