#include "normsplit/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "eigen_support.hpp"

namespace normsplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_exponent(double p, const char* name, bool allow_infinite) {
  if (std::isnan(p) || p < 1.0 || (!allow_infinite && std::isinf(p))) {
    throw std::invalid_argument(std::string(name) + " exponent must be in [1," +
                                (allow_infinite ? "inf]" : "inf)"));
  }
}

/// Subgradient of z -> ||z||_q (convention sign(0) = 0).
std::vector<double> norm_subgradient(std::span<const double> z, double q) {
  std::vector<double> g(z.size(), 0.0);
  if (std::isinf(q)) {
    size_t best = 0;
    for (size_t i = 1; i < z.size(); ++i) {
      if (std::abs(z[i]) > std::abs(z[best])) {
        best = i;
      }
    }
    g[best] = sign_of(z[best]);
    return g;
  }
  if (q == 1.0) {
    for (size_t i = 0; i < z.size(); ++i) {
      g[i] = sign_of(z[i]);
    }
    return g;
  }
  const double nq = vector_norm(z, q);
  if (nq == 0.0) {
    return g;
  }
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] != 0.0) {
      g[i] = sign_of(z[i]) * std::pow(std::abs(z[i]) / nq, q - 1.0);
    }
  }
  return g;
}

std::vector<double> transpose_apply(const Matrix& a, std::span<const double> y) {
  std::vector<double> x(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (int j = 0; j < a.cols(); ++j) {
      x[j] += r[j] * y[i];
    }
  }
  return x;
}

double two_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return std::sqrt(s);
}

void scale_to_unit(std::vector<double>& x, double p) {
  const double np = vector_norm(x, p);
  if (np > 0.0) {
    for (double& v : x) {
      v /= np;
    }
  }
}

}  // namespace

double vector_norm(std::span<const double> v, double q) {
  check_exponent(q, "norm", true);
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) {
      m = std::max(m, std::abs(x));
    }
    return m;
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double x : v) {
      s += std::abs(x);
    }
    return s;
  }
  if (q == 2.0) {
    return two_norm(v);
  }
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  if (m == 0.0) {
    return 0.0;
  }
  double s = 0.0;
  for (double x : v) {
    if (x != 0.0) {
      s += std::pow(std::abs(x) / m, q);
    }
  }
  return m * std::pow(s, 1.0 / q);
}

double dual_exponent(double p) {
  check_exponent(p, "dual", true);
  if (p == 1.0) {
    return kInf;
  }
  if (std::isinf(p)) {
    return 1.0;
  }
  return p / (p - 1.0);
}

NormValue one_q_norm(const Matrix& a, double q) {
  check_exponent(q, "q", false);
  NormValue out;
  out.exactness = Exactness::exact;
  out.witness_index = 0;
  for (int j = 0; j < a.cols(); ++j) {
    const double nj = vector_norm(a.column(j), q);
    if (nj > out.value) {
      out.value = nj;
      out.witness_index = j;
    }
  }
  out.witness.assign(a.cols(), 0.0);
  out.witness[out.witness_index] = 1.0;
  return out;
}

NormValue p_infty_norm(const Matrix& a, double p) {
  check_exponent(p, "p", true);
  const double pd = dual_exponent(p);
  NormValue out;
  out.exactness = Exactness::exact;
  out.witness_index = 0;
  for (int i = 0; i < a.rows(); ++i) {
    const double ni = vector_norm(a.row(i), pd);
    if (ni > out.value) {
      out.value = ni;
      out.witness_index = i;
    }
  }
  // Dual witness x with ||x||_p = 1 and (v_best, x) = ||v_best||_p'.
  auto v = a.row(out.witness_index);
  out.witness.assign(a.cols(), 0.0);
  if (out.value > 0.0) {
    if (std::isinf(pd)) {
      int jbest = 0;
      for (int j = 1; j < a.cols(); ++j) {
        if (std::abs(v[j]) > std::abs(v[jbest])) {
          jbest = j;
        }
      }
      out.witness[jbest] = sign_of(v[jbest]);
    } else if (pd == 1.0) {
      for (int j = 0; j < a.cols(); ++j) {
        out.witness[j] = sign_of(v[j]);
      }
    } else {
      const double denom = std::pow(out.value, pd - 1.0);
      for (int j = 0; j < a.cols(); ++j) {
        out.witness[j] = sign_of(v[j]) * std::pow(std::abs(v[j]), pd - 1.0) / denom;
      }
    }
  }
  return out;
}

NormValue two_two_norm(const Matrix& a) {
  const Eigen::MatrixXd m = detail::to_eigen(a);
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("two_two_norm: eigensolver failed");
  }
  const int last = a.cols() - 1;
  NormValue out;
  out.value = std::sqrt(std::max(es.eigenvalues()(last), 0.0));
  out.exactness = Exactness::exact;
  out.witness.assign(a.cols(), 0.0);
  for (int j = 0; j < a.cols(); ++j) {
    out.witness[j] = es.eigenvectors()(j, last);
  }
  return out;
}

NormValue infty_q_norm(const Matrix& a, double q) {
  check_exponent(q, "q", true);
  const int n = a.cols();
  if (n > 20) {
    throw std::invalid_argument("infty_q_norm: sign enumeration limited to 20 columns");
  }
  NormValue out;
  out.exactness = Exactness::exact;
  std::vector<double> x(n, 1.0);
  // ||A xi||_q = ||A (-xi)||_q, so the first coordinate stays +1.
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  std::vector<double> best = x;
  for (std::uint64_t m = 0; m < patterns; ++m) {
    for (int j = 1; j < n; ++j) {
      x[j] = ((m >> (j - 1)) & 1u) ? -1.0 : 1.0;
    }
    const double val = vector_norm(a.apply(x), q);
    if (val > out.value) {
      out.value = val;
      best = x;
    }
  }
  out.witness = std::move(best);
  return out;
}

NormValue pq_norm_lower_bound(const Matrix& a, double p, double q, int budget,
                              std::uint64_t seed) {
  check_exponent(p, "p", true);
  check_exponent(q, "q", true);
  if (budget < 0) {
    throw std::invalid_argument("pq_norm_lower_bound: budget must be non-negative");
  }
  const int n = a.cols();

  NormValue out;
  out.exactness = Exactness::lower_bound;
  out.witness.assign(n, 0.0);

  const auto ratio = [&](const std::vector<double>& x) {
    const double np = vector_norm(x, p);
    if (np == 0.0) {
      return -1.0;
    }
    return vector_norm(a.apply(x), q) / np;
  };

  const auto consider = [&](const std::vector<double>& x, double value) {
    if (value > out.value) {
      out.value = value;
      out.witness = x;
      const double np = vector_norm(out.witness, p);
      if (np > 0.0) {
        for (double& v : out.witness) {
          v /= np;
        }
      }
    }
  };

  // Ascent on the homogeneous ratio: every visited point is a valid bound, so
  // steps only ever tighten the result. Geometrically diminishing steps with
  // monotone acceptance reach ~1e-7 resolution within the 50-step budget.
  const auto refine = [&](std::vector<double> x) {
    double current = ratio(x);
    consider(x, current);
    if (current < 0.0) {
      return;
    }
    double step = 1.0;
    for (int s = 0; s < 50; ++s, step *= 0.75) {
      const std::vector<double> z = a.apply(x);
      std::vector<double> g = transpose_apply(a, norm_subgradient(z, q));
      const double gn = two_norm(g);
      if (gn == 0.0) {
        break;
      }
      std::vector<double> trial = x;
      for (int j = 0; j < n; ++j) {
        trial[j] += step * g[j] / gn;
      }
      scale_to_unit(trial, p);
      const double value = ratio(trial);
      if (value > current) {
        current = value;
        x = std::move(trial);
        consider(x, current);
      }
    }
  };

  for (int j = 0; j < n; ++j) {
    std::vector<double> x(n, 0.0);
    x[j] = 1.0;
    refine(x);
    x[j] = -1.0;
    refine(std::move(x));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int b = 0; b < budget; ++b) {
    std::vector<double> x(n);
    for (double& v : x) {
      v = gauss(rng);
    }
    scale_to_unit(x, p);
    refine(std::move(x));
  }
  return out;
}

PointwiseRatio pointwise_ratio_q2(const Matrix& a, const Partition& p) {
  if (p.ambient_size() != a.rows()) {
    throw std::invalid_argument("pointwise_ratio_q2: partition/matrix size mismatch");
  }
  if (a.max_abs() == 0.0) {
    throw std::invalid_argument("pointwise_ratio_q2: zero matrix");
  }
  const Eigen::MatrixXd basis = detail::row_space_basis(a);  // n x r
  const int r = static_cast<int>(basis.cols());
  const Eigen::MatrixXd m = detail::to_eigen(a);
  const Eigen::MatrixXd projected = m * basis;  // N x r, rows u_i^T

  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(r, r);
  for (int i : p.block1()) {
    m1.noalias() += projected.row(i).transpose() * projected.row(i);
  }
  Eigen::MatrixXd gram = m1;
  for (int i : p.block2()) {
    gram.noalias() += projected.row(i).transpose() * projected.row(i);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("pointwise_ratio_q2: projected Gram not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  // W = L^-1 M1 L^-T shares eigenvectors structure with the pencil (M1, G);
  // its spectrum lies in [0,1] and block2's pencil is I - W.
  Eigen::MatrixXd w = l.triangularView<Eigen::Lower>().solve(m1);
  w = l.triangularView<Eigen::Lower>().solve(w.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("pointwise_ratio_q2: eigensolver failed");
  }

  const double mu_max = std::clamp(es.eigenvalues()(r - 1), 0.0, 1.0);
  const double mu_min = std::clamp(es.eigenvalues()(0), 0.0, 1.0);

  PointwiseRatio out;
  out.r1 = std::sqrt(mu_max);
  out.r2 = std::sqrt(1.0 - mu_min);

  const auto lift = [&](int eig_index) {
    Eigen::VectorXd y =
        l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(eig_index));
    Eigen::VectorXd x = basis * y;
    const double nx = x.norm();
    if (nx > 0.0) {
      x /= nx;
    }
    return std::vector<double>(x.data(), x.data() + x.size());
  };
  out.witness1 = lift(r - 1);
  out.witness2 = lift(0);
  return out;
}

}  // namespace normsplit
