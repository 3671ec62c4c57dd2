#include "normsplit/partitioners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "normsplit/norms.hpp"

namespace normsplit {

namespace {

constexpr int kExhaustiveLimit = 24;

/// Shared per-mask evaluation helpers. All block sums run over row indices in
/// ascending order so that search-time values and evaluate_objective values
/// agree bit for bit.

double discrepancy_for_blocks(const TildeColumns& tc, const std::vector<int>& block1,
                              const std::vector<int>& block2) {
  double worst = 0.0;
  for (const auto& col : tc.columns) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i : block1) {
      s1 += col[i];
    }
    for (int i : block2) {
      s2 += col[i];
    }
    worst = std::max(worst, std::abs(s1 - s2));
  }
  return worst;
}

double fraction_for_blocks(const TildeColumns& tc, const std::vector<int>& block1,
                           const std::vector<int>& block2) {
  double worst = 0.0;
  for (const auto& col : tc.columns) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i : block1) {
      s1 += col[i];
    }
    for (int i : block2) {
      s2 += col[i];
    }
    const double total = s1 + s2;
    if (total > 0.0) {
      worst = std::max(worst, std::max(s1, s2) / total);
    }
  }
  return worst;
}

double one_q_ratio_for_blocks(const Matrix& a, double q, const std::vector<int>& block1,
                              const std::vector<int>& block2) {
  const double full = one_q_norm(a, q).value;
  if (full == 0.0) {
    return 0.0;
  }
  double worst = 0.0;
  for (const auto* block : {&block1, &block2}) {
    if (block->empty()) {
      continue;
    }
    worst = std::max(worst, one_q_norm(submatrix(a, *block), q).value);
  }
  return worst / full;
}

void blocks_from_mask(int n_rows, std::uint64_t mask, std::vector<int>& block1,
                      std::vector<int>& block2) {
  block1.clear();
  block2.clear();
  block1.push_back(0);
  for (int t = 1; t < n_rows; ++t) {
    (((mask >> (t - 1)) & 1u) ? block2 : block1).push_back(t);
  }
}

}  // namespace

const char* objective_kind_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::one_q_ratio:
      return "one-q-ratio";
    case ObjectiveKind::pointwise_ratio:
      return "pointwise-ratio";
    case ObjectiveKind::column_discrepancy:
      return "column-discrepancy";
    case ObjectiveKind::column_fraction:
      return "column-fraction";
  }
  return "unknown";
}

TildeColumns tilde_columns(const Matrix& a, double q) {
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
    throw std::invalid_argument("tilde_columns: q must be in [1,inf)");
  }
  TildeColumns tc;
  tc.columns.assign(a.cols(), std::vector<double>(a.rows(), 0.0));
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      const double x = std::abs(a(i, j));
      if (q == 1.0) {
        tc.columns[j][i] = x;
      } else if (q == 2.0) {
        tc.columns[j][i] = x * x;
      } else {
        tc.columns[j][i] = std::pow(x, q);
      }
    }
  }
  return tc;
}

double evaluate_objective(const Matrix& a, const Partition& p, ObjectiveKind kind,
                          double q) {
  if (p.ambient_size() != a.rows()) {
    throw std::invalid_argument("evaluate_objective: partition/matrix size mismatch");
  }
  switch (kind) {
    case ObjectiveKind::one_q_ratio:
      return one_q_ratio_for_blocks(a, q, p.block1(), p.block2());
    case ObjectiveKind::pointwise_ratio: {
      if (q != 2.0) {
        throw std::invalid_argument("pointwise-ratio objective is exact only for q = 2");
      }
      const PointwiseRatio r = pointwise_ratio_q2(a, p);
      return std::max(r.r1, r.r2);
    }
    case ObjectiveKind::column_discrepancy: {
      const TildeColumns tc = tilde_columns(a, q);
      return discrepancy_for_blocks(tc, p.block1(), p.block2());
    }
    case ObjectiveKind::column_fraction: {
      const TildeColumns tc = tilde_columns(a, q);
      return fraction_for_blocks(tc, p.block1(), p.block2());
    }
  }
  throw std::invalid_argument("evaluate_objective: unknown objective kind");
}

PartitionResult exhaustive_best_partition(const Matrix& a, double q,
                                          ObjectiveKind objective) {
  const int n_rows = a.rows();
  if (n_rows > kExhaustiveLimit) {
    throw std::invalid_argument(
        "exhaustive_best_partition: N > 24; use sign_discrepancy_partition or "
        "balanced_column_partition in heuristic mode");
  }
  if (objective != ObjectiveKind::one_q_ratio &&
      objective != ObjectiveKind::pointwise_ratio) {
    throw std::invalid_argument(
        "exhaustive_best_partition: objective must be one-q-ratio or pointwise-ratio");
  }
  if (objective == ObjectiveKind::pointwise_ratio && q != 2.0) {
    throw std::invalid_argument(
        "exhaustive_best_partition: pointwise-ratio requires q = 2 (exact "
        "verification unavailable otherwise)");
  }

  const std::uint64_t total = std::uint64_t{1} << (n_rows - 1);
  std::vector<int> block1;
  std::vector<int> block2;
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;

  for (std::uint64_t mask = 0; mask < total; ++mask) {
    blocks_from_mask(n_rows, mask, block1, block2);
    double value = 0.0;
    if (objective == ObjectiveKind::one_q_ratio) {
      value = one_q_ratio_for_blocks(a, q, block1, block2);
    } else {
      const PointwiseRatio r = pointwise_ratio_q2(a, Partition::from_mask(n_rows, mask));
      value = std::max(r.r1, r.r2);
    }
    if (value < best_value) {
      best_value = value;
      best_mask = mask;
    }
  }

  PartitionResult result{.partition = Partition::from_mask(n_rows, best_mask),
                         .objective = 0.0,
                         .kind = objective,
                         .q = q,
                         .method = "exhaustive",
                         .partitions_examined = total,
                         .iterations = 0,
                         .achieved = true};
  result.objective = evaluate_objective(a, result.partition, objective, q);
  return result;
}

PartitionResult sign_discrepancy_partition(const Matrix& a, double q, SearchMode mode) {
  const int n_rows = a.rows();
  const TildeColumns tc = tilde_columns(a, q);

  std::vector<int> block1;
  std::vector<int> block2;
  std::uint64_t examined = 0;
  std::uint64_t iterations = 0;
  std::uint64_t best_mask = 0;

  if (mode == SearchMode::exact) {
    if (n_rows > kExhaustiveLimit) {
      throw std::invalid_argument("sign_discrepancy_partition: exact mode requires N <= 24");
    }
    const std::uint64_t total = std::uint64_t{1} << (n_rows - 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      blocks_from_mask(n_rows, mask, block1, block2);
      const double d = discrepancy_for_blocks(tc, block1, block2);
      if (d < best) {
        best = d;
        best_mask = mask;
      }
    }
    examined = total;
  } else {
    // Greedy first-fit-decreasing by the rows' q-mass, then single-flip
    // local search to a local optimum.
    std::vector<double> row_mass(n_rows, 0.0);
    for (int i = 0; i < n_rows; ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        row_mass[i] += tc.columns[j][i];
      }
    }
    std::vector<int> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
      if (row_mass[lhs] != row_mass[rhs]) {
        return row_mass[lhs] > row_mass[rhs];
      }
      return lhs < rhs;
    });

    std::vector<double> running(a.cols(), 0.0);
    std::vector<int> sign(n_rows, 1);
    for (int i : order) {
      double plus = 0.0;
      double minus = 0.0;
      for (int j = 0; j < a.cols(); ++j) {
        plus = std::max(plus, std::abs(running[j] + tc.columns[j][i]));
        minus = std::max(minus, std::abs(running[j] - tc.columns[j][i]));
      }
      sign[i] = plus <= minus ? 1 : -1;
      for (int j = 0; j < a.cols(); ++j) {
        running[j] += sign[i] * tc.columns[j][i];
      }
      ++examined;
    }

    const auto max_abs = [&](const std::vector<double>& sums) {
      double worst = 0.0;
      for (double s : sums) {
        worst = std::max(worst, std::abs(s));
      }
      return worst;
    };

    double current = max_abs(running);
    for (int pass = 0; pass < 100; ++pass) {
      bool improved = false;
      for (int i = 0; i < n_rows; ++i) {
        std::vector<double> flipped = running;
        for (int j = 0; j < a.cols(); ++j) {
          flipped[j] -= 2.0 * sign[i] * tc.columns[j][i];
        }
        const double candidate = max_abs(flipped);
        ++iterations;
        if (candidate < current) {
          current = candidate;
          running = std::move(flipped);
          sign[i] = -sign[i];
          improved = true;
        }
      }
      if (!improved) {
        break;
      }
    }

    if (sign[0] < 0) {
      for (int& s : sign) {
        s = -s;
      }
    }
    for (int t = 1; t < n_rows; ++t) {
      if (sign[t] < 0) {
        best_mask |= std::uint64_t{1} << (t - 1);
      }
    }
  }

  PartitionResult result{.partition = Partition::from_mask(n_rows, best_mask),
                         .objective = 0.0,
                         .kind = ObjectiveKind::column_discrepancy,
                         .q = q,
                         .method = mode == SearchMode::exact ? "enumeration"
                                                             : "greedy+local-search",
                         .partitions_examined = examined,
                         .iterations = iterations,
                         .achieved = true};
  result.objective =
      evaluate_objective(a, result.partition, ObjectiveKind::column_discrepancy, q);
  return result;
}

PartitionResult balanced_column_partition(const Matrix& a, double q,
                                          double target_fraction) {
  if (!(target_fraction >= 0.5 && target_fraction <= 1.0)) {
    throw std::invalid_argument(
        "balanced_column_partition: target fraction must lie in [1/2, 1] (the blocks "
        "partition each column's mass)");
  }
  const int n_rows = a.rows();
  const TildeColumns tc = tilde_columns(a, q);
  constexpr double kSlack = 1e-12;

  std::vector<int> block1;
  std::vector<int> block2;

  if (n_rows <= kExhaustiveLimit) {
    const std::uint64_t total = std::uint64_t{1} << (n_rows - 1);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    std::uint64_t examined = 0;
    bool achieved = false;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      blocks_from_mask(n_rows, mask, block1, block2);
      const double frac = fraction_for_blocks(tc, block1, block2);
      ++examined;
      if (frac < best) {
        best = frac;
        best_mask = mask;
      }
      if (frac <= target_fraction + kSlack) {
        best_mask = mask;
        achieved = true;
        break;
      }
    }
    PartitionResult result{.partition = Partition::from_mask(n_rows, best_mask),
                           .objective = 0.0,
                           .kind = ObjectiveKind::column_fraction,
                           .q = q,
                           .method = "exhaustive",
                           .partitions_examined = examined,
                           .iterations = 0,
                           .achieved = achieved};
    result.objective =
        evaluate_objective(a, result.partition, ObjectiveKind::column_fraction, q);
    return result;
  }

  PartitionResult heur = sign_discrepancy_partition(a, q, SearchMode::heuristic);
  PartitionResult result{.partition = heur.partition,
                         .objective = 0.0,
                         .kind = ObjectiveKind::column_fraction,
                         .q = q,
                         .method = "sign-heuristic",
                         .partitions_examined = heur.partitions_examined,
                         .iterations = heur.iterations,
                         .achieved = false};
  result.objective =
      evaluate_objective(a, result.partition, ObjectiveKind::column_fraction, q);
  result.achieved = result.objective <= target_fraction + kSlack;
  return result;
}

Partition random_partition(int ambient_size, std::uint64_t seed) {
  if (ambient_size < 2) {
    throw std::invalid_argument("random_partition: no nontrivial partition exists");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> block2;
  while (true) {
    block2.clear();
    for (int t = 1; t < ambient_size; ++t) {
      if (rng() & 1u) {
        block2.push_back(t);
      }
    }
    if (!block2.empty()) {
      break;
    }
  }
  return Partition(ambient_size, std::move(block2));
}

}  // namespace normsplit
