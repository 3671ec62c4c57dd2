#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "normsplit/matrix.hpp"

namespace normsplit {

enum class Task {
  check_conditions,
  best_partition,
  sign_partition,
  balanced_partition,
  verify,
  counterexample,
  ensemble_sweep,
};

Task parse_task(std::string_view name);
const char* task_name(Task task);

/// One batch run: a task applied to every matrix from either an input file
/// or a generated ensemble (exactly one of the two must be present).
struct ExperimentConfig {
  Task task = Task::check_conditions;
  double q = 2.0;
  double p = 2.0;
  std::string input_path;  // mutually exclusive with ensemble
  std::string format;      // "", "csv" or "json"; inferred from extension if empty
  std::string ensemble;    // "", "gaussian", "orthonormal-columns", "sign", "theorem4"
  int big_n = 0;
  int n = 0;
  int count = 1;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string method;  // "", "exact" or "heuristic"
  std::string output_path;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Runs the configured task over all matrices and assembles the report.
/// Per-matrix errors are recorded in the report and the sweep continues.
/// Identical configs reproduce the report byte-for-byte outside the "timing"
/// block. If `summary` is non-null, a one-line-per-matrix table is printed.
nlohmann::json run_experiment(const ExperimentConfig& config,
                              std::ostream* summary = nullptr);

/// Exit status for a finished report: 0 ok, 1 some verification failed,
/// 2 input error.
int report_exit_code(const nlohmann::json& report);

/// The report minus its timing block (the deterministic region).
nlohmann::json report_without_timing(nlohmann::json report);

/// Re-loads the matrices named by the report's config and re-evaluates every
/// stored partition objective; true iff all stored values reproduce exactly.
bool reverify_report(const nlohmann::json& report);

}  // namespace normsplit
