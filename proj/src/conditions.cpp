#include "normsplit/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "eigen_support.hpp"
#include "normsplit/norms.hpp"

namespace normsplit {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_q(double q) {
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
    throw std::invalid_argument("condition eps: q must be in [1,inf)");
  }
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// min over alpha of sum_i |z_i + alpha d_i| by weighted median of the
/// breakpoints -z_i/d_i with weights |d_i|.
double l1_line_minimizer(const Eigen::VectorXd& z, const Eigen::VectorXd& d) {
  std::vector<std::pair<double, double>> breaks;  // (breakpoint, weight)
  double total = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    if (d(i) != 0.0) {
      breaks.emplace_back(-z(i) / d(i), std::abs(d(i)));
      total += std::abs(d(i));
    }
  }
  if (breaks.empty()) {
    return 0.0;
  }
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  for (const auto& [point, weight] : breaks) {
    acc += weight;
    if (acc >= total / 2.0) {
      return point;
    }
  }
  return breaks.back().first;
}

struct SolveState {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd t;
  std::int64_t iterations = 0;
  double final_gap = std::numeric_limits<double>::infinity();
};

double norm_q(const Eigen::VectorXd& z, double q) {
  return vector_norm(std::span<const double>(z.data(), z.size()), q);
}

Eigen::VectorXd norm_q_subgradient(const Eigen::VectorXd& z, double q) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  if (q == 1.0) {
    for (int i = 0; i < z.size(); ++i) {
      g(i) = sign_of(z(i));
    }
    return g;
  }
  const double nq = norm_q(z, q);
  if (nq == 0.0) {
    return g;
  }
  for (int i = 0; i < z.size(); ++i) {
    if (z(i) != 0.0) {
      g(i) = sign_of(z(i)) * std::pow(std::abs(z(i)) / nq, q - 1.0);
    }
  }
  return g;
}

/// One descent run for F(t) = ||base + D t||_q from the given start:
/// Armijo-backtracked subgradient steps, falling back to diminishing
/// unguarded steps when backtracking stalls at a kink.
SolveState descend(const Eigen::VectorXd& base, const Eigen::MatrixXd& d, double q,
                   Eigen::VectorXd t, const RowEpsOptions& options) {
  SolveState st;
  st.t = std::move(t);
  Eigen::VectorXd z = base + d * st.t;
  st.value = norm_q(z, q);

  double eta = 1.0;
  int fallback_steps = 0;
  int stalled = 0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    ++st.iterations;
    const Eigen::VectorXd g = d.transpose() * norm_q_subgradient(z, q);
    const double gsq = g.squaredNorm();
    if (gsq == 0.0) {
      st.final_gap = 0.0;
      break;
    }

    double step = eta;
    bool accepted = false;
    while (step > 1e-18) {
      const Eigen::VectorXd t_trial = st.t - step * g;
      const Eigen::VectorXd z_trial = base + d * t_trial;
      const double f_trial = norm_q(z_trial, q);
      if (f_trial <= st.value - 1e-4 * step * gsq) {
        const double rel =
            (st.value - f_trial) / std::max(st.value, std::numeric_limits<double>::min());
        st.t = t_trial;
        z = z_trial;
        st.value = f_trial;
        st.final_gap = rel;
        eta = step * 2.0;
        accepted = true;
        stalled = 0;
        if (rel < options.relative_tolerance) {
          return st;
        }
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Kink: take a plain diminishing subgradient step, keep it only if it
      // improves (the best value is what we report).
      ++fallback_steps;
      const double fstep = 0.1 / (std::sqrt(static_cast<double>(fallback_steps)) *
                                  std::sqrt(gsq));
      const Eigen::VectorXd t_trial = st.t - fstep * g;
      const Eigen::VectorXd z_trial = base + d * t_trial;
      const double f_trial = norm_q(z_trial, q);
      if (f_trial < st.value) {
        st.final_gap =
            (st.value - f_trial) / std::max(st.value, std::numeric_limits<double>::min());
        st.t = t_trial;
        z = z_trial;
        st.value = f_trial;
        stalled = 0;
      } else if (++stalled > 50) {
        break;
      }
      eta = 1.0;
    }
  }
  return st;
}

/// Polyhedral polish for q = 1: coordinate descent with exact line
/// minimization over the active sign pattern's breakpoints.
void polish_l1(const Eigen::VectorXd& base, const Eigen::MatrixXd& d, SolveState& st) {
  if (d.cols() == 0) {
    return;
  }
  Eigen::VectorXd z = base + d * st.t;
  for (int pass = 0; pass < 50; ++pass) {
    bool improved = false;
    for (int c = 0; c < d.cols(); ++c) {
      const double alpha = l1_line_minimizer(z, d.col(c));
      if (alpha == 0.0) {
        continue;
      }
      const Eigen::VectorXd z_trial = z + alpha * d.col(c);
      const double f_trial = z_trial.lpNorm<1>();
      if (f_trial < st.value - 1e-15 * std::max(1.0, st.value)) {
        st.t(c) += alpha;
        z = z_trial;
        st.value = f_trial;
        improved = true;
      }
      ++st.iterations;
    }
    if (!improved) {
      break;
    }
  }
}

}  // namespace

ConditionReport entry_condition_eps(const Matrix& a, double q) {
  check_q(q);
  ConditionReport report;
  report.q = q;
  std::vector<double> col_norms(a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    col_norms[j] = vector_norm(a.column(j), q);
    if (col_norms[j] == 0.0) {
      throw std::invalid_argument("entry condition: column " + std::to_string(j) +
                                  " is identically zero");
    }
  }
  report.per_entry_eps.assign(a.rows(), std::vector<double>(a.cols(), 0.0));
  report.eps_entry_min = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const double e = std::abs(a(i, j)) / col_norms[j];
      report.per_entry_eps[i][j] = e;
      report.eps_entry_min = std::max(report.eps_entry_min, e);
    }
  }
  return report;
}

namespace {

/// Whitened row-space coordinates shared across the rows of one matrix:
/// x = V_r S^-1 yhat, so the image matrix B = A V_r S^-1 has orthonormal
/// columns and the descent is well conditioned no matter how A itself is
/// conditioned. Directions orthogonal to every row are quotiented out by
/// construction.
struct WhitenedRowSpace {
  Eigen::MatrixXd b;    // N x r, orthonormal columns (left singular vectors)
  Eigen::MatrixXd v_r;  // n x r right singular vectors
  Eigen::VectorXd sigma;
  int r = 0;
};

WhitenedRowSpace whiten_row_space(const Matrix& a) {
  WhitenedRowSpace ctx;
  ctx.r = a.rank();
  if (ctx.r == 0) {
    return ctx;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  ctx.b = svd.matrixU().leftCols(ctx.r);
  ctx.v_r = svd.matrixV().leftCols(ctx.r);
  ctx.sigma = svd.singularValues().head(ctx.r);
  return ctx;
}

RowEpsDetail row_eps_in_context(const Matrix& a, const WhitenedRowSpace& ctx, double q,
                                int row, const RowEpsOptions& options) {
  RowEpsDetail detail;
  detail.closed_form_eps = kNan;

  bool zero_row = true;
  for (double v : a.row(row)) {
    if (v != 0.0) {
      zero_row = false;
      break;
    }
  }
  if (zero_row || ctx.r == 0) {
    return detail;  // sup is 0
  }

  const int r = ctx.r;
  const Eigen::MatrixXd& b = ctx.b;
  Eigen::VectorXd v(a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    v(j) = a(row, j);
  }
  Eigen::VectorXd u = ctx.v_r.transpose() * v;
  for (int i = 0; i < r; ++i) {
    u(i) /= ctx.sigma(i);
  }
  // (u, yhat) = (v, x) for x in the row space, so the problem becomes
  //   minimize ||B yhat||_q  subject to  (u, yhat) = 1.

  if (q == 2.0) {
    detail.closed_form_eps = std::clamp(u.norm(), 0.0, 1.0);
  }

  const Eigen::VectorXd y0 = u / u.squaredNorm();
  Eigen::MatrixXd null_basis(r, std::max(r - 1, 0));
  if (r > 1) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    const Eigen::MatrixXd full_q = qr.householderQ();
    null_basis = full_q.rightCols(r - 1);
  }
  const Eigen::VectorXd base = b * y0;
  const Eigen::MatrixXd d = b * null_basis;

  SolveState best;
  best.t = Eigen::VectorXd::Zero(null_basis.cols());
  best.value = norm_q(base, q);
  best.final_gap = 0.0;

  if (null_basis.cols() == 0) {
    detail.solver_eps = best.value > 0.0 ? std::clamp(1.0 / best.value, 0.0, 1.0) : 0.0;
  } else {
    // Feasible points from the basis probes +-e_j / a_row_j; evaluating them
    // guarantees the result dominates the probe lower bounds.
    Eigen::VectorXd best_probe_t = Eigen::VectorXd::Zero(null_basis.cols());
    double best_probe_value = std::numeric_limits<double>::infinity();
    for (int j = 0; j < a.cols(); ++j) {
      if (a(row, j) == 0.0) {
        continue;
      }
      Eigen::VectorXd yhat = ctx.v_r.row(j).transpose();
      for (int i = 0; i < r; ++i) {
        yhat(i) *= ctx.sigma(i);
      }
      yhat /= a(row, j);
      const Eigen::VectorXd t = null_basis.transpose() * (yhat - y0);
      const double f = norm_q(base + d * t, q);
      if (f < best_probe_value) {
        best_probe_value = f;
        best_probe_t = t;
      }
    }

    std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ull * (row + 1)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double spread = y0.norm();

    for (int restart = 0; restart < std::max(options.restarts, 1); ++restart) {
      Eigen::VectorXd t0 = Eigen::VectorXd::Zero(null_basis.cols());
      if (restart == 1 && std::isfinite(best_probe_value)) {
        t0 = best_probe_t;
      } else if (restart > 0) {
        for (int i = 0; i < t0.size(); ++i) {
          t0(i) = spread * gauss(rng);
        }
      }
      SolveState st = descend(base, d, q, std::move(t0), options);
      if (q == 1.0) {
        polish_l1(base, d, st);
      }
      best.iterations += st.iterations;
      if (st.value < best.value) {
        best.value = st.value;
        best.t = st.t;
        best.final_gap = st.final_gap;
      }
    }
    if (std::isfinite(best_probe_value) && best_probe_value < best.value) {
      best.value = best_probe_value;
      best.t = best_probe_t;
    }
    detail.solver_eps = best.value > 0.0 ? std::clamp(1.0 / best.value, 0.0, 1.0) : 0.0;
  }

  detail.diagnostics.iterations = best.iterations;
  detail.diagnostics.final_gap = best.final_gap;

  if (q == 2.0) {
    if (options.cross_check &&
        std::abs(detail.closed_form_eps - detail.solver_eps) > 1e-6) {
      throw std::runtime_error(
          "row condition: solver disagrees with the q=2 closed form (closed " +
          std::to_string(detail.closed_form_eps) + ", solver " +
          std::to_string(detail.solver_eps) + ")");
    }
    detail.eps = options.use_closed_form ? detail.closed_form_eps : detail.solver_eps;
  } else {
    detail.eps = detail.solver_eps;
  }
  return detail;
}

}  // namespace

RowEpsDetail row_condition_eps_detail(const Matrix& a, double q, int row,
                                      const RowEpsOptions& options) {
  check_q(q);
  if (row < 0 || row >= a.rows()) {
    throw std::invalid_argument("row condition: row index out of range");
  }
  return row_eps_in_context(a, whiten_row_space(a), q, row, options);
}

double row_condition_eps(const Matrix& a, double q, int row, const RowEpsOptions& options) {
  return row_condition_eps_detail(a, q, row, options).eps;
}

ConditionReport full_row_report(const Matrix& a, double q, const RowEpsOptions& options) {
  check_q(q);
  const WhitenedRowSpace ctx = whiten_row_space(a);
  ConditionReport report;
  report.q = q;
  report.per_row_eps.resize(a.rows());
  report.eps_row_min = 0.0;
  report.diagnostics.final_gap = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    const RowEpsDetail detail = row_eps_in_context(a, ctx, q, i, options);
    report.per_row_eps[i] = detail.eps;
    report.eps_row_min = std::max(report.eps_row_min, detail.eps);
    report.diagnostics.iterations += detail.diagnostics.iterations;
    report.diagnostics.final_gap =
        std::max(report.diagnostics.final_gap, detail.diagnostics.final_gap);
  }
  return report;
}

}  // namespace normsplit
