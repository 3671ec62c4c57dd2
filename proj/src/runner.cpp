#include "normsplit/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "normsplit/bounds.hpp"
#include "normsplit/conditions.hpp"
#include "normsplit/counterexamples.hpp"
#include "normsplit/ensemble.hpp"
#include "normsplit/matrix_io.hpp"
#include "normsplit/norms.hpp"
#include "normsplit/partitioners.hpp"
#include "normsplit/verifiers.hpp"
#include "normsplit/version.hpp"

namespace normsplit {

namespace {

using nlohmann::json;

json bound_set_to_json(const BoundSet& s) {
  return json{{"q", s.q},
              {"N", s.big_n},
              {"n", s.n},
              {"rank", s.rank},
              {"eps", s.eps},
              {"eps_tag", s.tag == EpsTag::row_condition ? "row-condition" : "entry-condition"},
              {"gamma", s.gamma},
              {"psi", s.psi},
              {"bound_a", s.bound_a},
              {"bound_b", s.bound_b},
              {"bound_c", s.bound_c},
              {"theta", s.theta},
              {"gamma_valid", s.gamma_valid},
              {"psi_valid", s.psi_valid},
              {"psi_meaningful", s.psi_meaningful},
              {"abc_valid", s.abc_valid},
              {"bound_a_useful", s.bound_a_useful},
              {"bound_b_useful", s.bound_b_useful},
              {"bound_c_useful", s.bound_c_useful}};
}

json partition_result_to_json(const PartitionResult& r) {
  return json{{"kind", objective_kind_name(r.kind)},
              {"method", r.method},
              {"objective", r.objective},
              {"q", r.q},
              {"block1", r.partition.block1()},
              {"block2", r.partition.block2()},
              {"partitions_examined", r.partitions_examined},
              {"iterations", r.iterations},
              {"achieved", r.achieved}};
}

json verification_to_json(const VerificationReport& v, int cols) {
  json j{{"theorem", theorem_tag_name(v.tag)},
         {"achieved", v.achieved},
         {"achieved_max", v.achieved_max},
         {"claimed", v.claimed},
         {"claimed_valid", v.claimed_valid},
         {"pass", v.pass},
         {"failed", v.failed},
         {"exactness", v.exactness == Exactness::exact ? "exact" : "lower-bound"},
         {"tolerance", v.tolerance}};
  if (!v.note.empty()) {
    j["note"] = v.note;
  }
  if (v.tag == TheoremTag::corollary_two_sided) {
    j["raw_direction_holds"] = v.raw_direction_holds;
  }
  if (cols <= 32) {
    j["witnesses"] = v.witnesses;
  } else {
    j["witnesses_omitted"] = true;
  }
  return j;
}

struct MatrixSource {
  Matrix matrix;
  std::string label;
};

std::vector<MatrixSource> collect_matrices(const ExperimentConfig& config) {
  std::vector<MatrixSource> out;
  if (!config.input_path.empty()) {
    MatrixFormat format;
    if (!config.format.empty()) {
      format = parse_matrix_format(config.format);
    } else {
      const auto ext = std::filesystem::path(config.input_path).extension().string();
      format = ext == ".json" ? MatrixFormat::json : MatrixFormat::csv;
    }
    out.push_back({load_matrix(config.input_path, format), "input:" + config.input_path});
    return out;
  }
  const EnsembleKind kind = parse_ensemble_kind(config.ensemble);
  for (int i = 0; i < config.count; ++i) {
    out.push_back({make_ensemble_matrix(kind, config.big_n, config.n, config.q,
                                        config.seed, i),
                   "ensemble:" + config.ensemble + "[" + std::to_string(i) + "]"});
  }
  return out;
}

void validate_config(const ExperimentConfig& config) {
  const bool has_input = !config.input_path.empty();
  const bool has_ensemble = !config.ensemble.empty();
  if (has_input == has_ensemble) {
    throw std::invalid_argument(
        "config: exactly one of an input path or an ensemble spec is required");
  }
  if (config.task == Task::ensemble_sweep && !has_ensemble) {
    throw std::invalid_argument("config: ensemble-sweep requires an ensemble spec");
  }
  if (config.task == Task::counterexample) {
    if (has_input) {
      throw std::invalid_argument(
          "config: the counterexample task constructs its own matrix; pass --ensemble "
          "theorem4 --N 2k instead of --input");
    }
    if (parse_ensemble_kind(config.ensemble) != EnsembleKind::theorem4) {
      throw std::invalid_argument("config: counterexample task requires ensemble theorem4");
    }
  }
  const bool stochastic_source =
      has_ensemble && parse_ensemble_kind(config.ensemble) != EnsembleKind::theorem4;
  const bool stochastic_task =
      config.task == Task::verify || config.task == Task::ensemble_sweep;
  if ((stochastic_source || stochastic_task) && !config.has_seed) {
    throw std::invalid_argument("config: --seed is mandatory for stochastic tasks");
  }
  if (!config.method.empty() && config.method != "exact" && config.method != "heuristic") {
    throw std::invalid_argument("config: method must be 'exact' or 'heuristic'");
  }
}

SearchMode pick_mode(const ExperimentConfig& config, int n_rows) {
  if (config.method == "exact") {
    return SearchMode::exact;
  }
  if (config.method == "heuristic") {
    return SearchMode::heuristic;
  }
  return n_rows <= 24 ? SearchMode::exact : SearchMode::heuristic;
}

/// The verifier battery shared by the verify and ensemble-sweep tasks.
void run_verify_battery(const ExperimentConfig& config, const Matrix& a, json& entry,
                        int matrix_index) {
  json& partitions = entry["partitions"];
  json& verifications = entry["verifications"];

  const bool have_entry_eps = entry["conditions"].contains("eps_entry_min");
  const double eps_entry =
      have_entry_eps ? entry["conditions"]["eps_entry_min"].get<double>() : 0.0;
  const double eps_row = entry["conditions"]["eps_row_min"].get<double>();
  const BoundSet row_bounds =
      evaluate_bounds(config.q, a.rows(), a.cols(), a.rank(), eps_row, EpsTag::row_condition);

  std::optional<Partition> candidate;
  if (a.rows() <= 24) {
    const ObjectiveKind objective =
        config.q == 2.0 ? ObjectiveKind::pointwise_ratio : ObjectiveKind::one_q_ratio;
    PartitionResult best = exhaustive_best_partition(a, config.q, objective);
    candidate = best.partition;
    partitions.push_back(partition_result_to_json(best));
  }

  PartitionResult sign = sign_discrepancy_partition(a, config.q, pick_mode(config, a.rows()));
  partitions.push_back(partition_result_to_json(sign));
  if (!candidate) {
    candidate = sign.partition;
  }

  if (have_entry_eps) {
    const double target =
        std::min(1.0, (1.0 + a.cols() * std::pow(eps_entry, config.q)) / 2.0);
    PartitionResult balanced = balanced_column_partition(a, config.q, target);
    json bj = partition_result_to_json(balanced);
    bj["target_fraction"] = target;
    partitions.push_back(std::move(bj));
  }

  const std::uint64_t seed = config.seed + 0x9e37u * static_cast<unsigned>(matrix_index);
  if (config.q == 2.0) {
    verifications.push_back(verification_to_json(verify_pointwise_q2(a, *candidate), a.cols()));
  }
  verifications.push_back(verification_to_json(
      estimate_pointwise_ratio(a, *candidate, config.q, 2000, seed), a.cols()));

  if (have_entry_eps) {
    const BoundSet entry_bounds = evaluate_bounds(config.q, a.rows(), a.cols(), a.rank(),
                                                  eps_entry, EpsTag::entry_condition);
    for (const auto& [name, claimed, valid] :
         {std::tuple{"bound_a", entry_bounds.bound_a, entry_bounds.abc_valid},
          std::tuple{"bound_b", entry_bounds.bound_b, entry_bounds.abc_valid},
          std::tuple{"bound_c", entry_bounds.bound_c, entry_bounds.abc_valid}}) {
      VerificationReport v = verify_one_q(a, *candidate, config.q, claimed);
      v.claimed_valid = valid;
      v.failed = v.failed && valid;
      v.note = std::string("claimed = ") + name;
      verifications.push_back(verification_to_json(v, a.cols()));
    }
  }

  // Sign-partition chain: ||A(block)||^q <= (||A||^q + D)/2 with the achieved
  // discrepancy D, expressed as a (1,q)-ratio claim.
  {
    const double full_q = std::pow(one_q_norm(a, config.q).value, config.q);
    if (full_q > 0.0) {
      const double chain_claim =
          std::pow((1.0 + sign.objective / full_q) / 2.0, 1.0 / config.q);
      VerificationReport v = verify_one_q(a, sign.partition, config.q, chain_claim);
      v.note = "sign-partition discrepancy chain";
      verifications.push_back(verification_to_json(v, a.cols()));
    }
  }

  if (row_bounds.psi <= 0.5) {
    verifications.push_back(verification_to_json(
        verify_two_sided(a, *candidate, config.q, row_bounds.psi), a.cols()));
  } else {
    verifications.push_back(json{{"theorem", theorem_tag_name(TheoremTag::corollary_two_sided)},
                                 {"skipped", true},
                                 {"note", "psi exceeds 1/2; bound carries no content"}});
  }

  verifications.push_back(
      verification_to_json(verify_qinf_invariance(a, *candidate, config.p), a.cols()));
  verifications.push_back(verification_to_json(
      verify_xq_norm(a, *candidate, config.p, config.q, row_bounds.gamma, 2000, seed + 1),
      a.cols()));
}

void run_one_matrix(const ExperimentConfig& config, const Matrix& a, json& entry,
                    int matrix_index) {
  entry["rows"] = a.rows();
  entry["cols"] = a.cols();
  entry["rank"] = a.rank();
  entry["partitions"] = json::array();
  entry["verifications"] = json::array();

  json conditions;
  conditions["q"] = config.q;
  try {
    const ConditionReport e = entry_condition_eps(a, config.q);
    conditions["eps_entry_min"] = e.eps_entry_min;
  } catch (const std::exception& ex) {
    conditions["entry_error"] = ex.what();
  }
  if (config.task != Task::counterexample) {
    const ConditionReport r = full_row_report(a, config.q);
    conditions["eps_row_min"] = r.eps_row_min;
    conditions["per_row_eps"] = r.per_row_eps;
    conditions["solver_iterations"] = r.diagnostics.iterations;
    conditions["solver_final_gap"] = r.diagnostics.final_gap;
  }
  entry["conditions"] = std::move(conditions);

  if (entry["conditions"].contains("eps_row_min")) {
    entry["bounds_row"] = bound_set_to_json(
        evaluate_bounds(config.q, a.rows(), a.cols(), a.rank(),
                        entry["conditions"]["eps_row_min"].get<double>(),
                        EpsTag::row_condition));
  }
  if (entry["conditions"].contains("eps_entry_min")) {
    entry["bounds_entry"] = bound_set_to_json(
        evaluate_bounds(config.q, a.rows(), a.cols(), a.rank(),
                        entry["conditions"]["eps_entry_min"].get<double>(),
                        EpsTag::entry_condition));
  }

  switch (config.task) {
    case Task::check_conditions:
      break;
    case Task::best_partition: {
      const ObjectiveKind objective =
          config.q == 2.0 ? ObjectiveKind::pointwise_ratio : ObjectiveKind::one_q_ratio;
      entry["partitions"].push_back(
          partition_result_to_json(exhaustive_best_partition(a, config.q, objective)));
      break;
    }
    case Task::sign_partition:
      entry["partitions"].push_back(partition_result_to_json(
          sign_discrepancy_partition(a, config.q, pick_mode(config, a.rows()))));
      break;
    case Task::balanced_partition: {
      if (!entry["conditions"].contains("eps_entry_min")) {
        throw std::invalid_argument("balanced partition needs the entrywise eps");
      }
      const double eps = entry["conditions"]["eps_entry_min"].get<double>();
      const double target = std::min(1.0, (1.0 + a.cols() * std::pow(eps, config.q)) / 2.0);
      PartitionResult balanced = balanced_column_partition(a, config.q, target);
      json bj = partition_result_to_json(balanced);
      bj["target_fraction"] = target;
      entry["partitions"].push_back(std::move(bj));
      break;
    }
    case Task::verify:
    case Task::ensemble_sweep:
      run_verify_battery(config, a, entry, matrix_index);
      break;
    case Task::counterexample: {
      const int k = config.big_n / 2;
      VerificationReport v = verify_theorem4(k, config.q);
      entry["verifications"].push_back(verification_to_json(v, /*cols=*/1));
      json ce;
      ce["k"] = k;
      if (entry["conditions"].contains("eps_entry_min")) {
        const double eps = entry["conditions"]["eps_entry_min"].get<double>();
        ce["eps_q_log2_2n"] =
            std::pow(eps, config.q) * std::log2(2.0 * static_cast<double>(a.cols()));
      }
      const SubsetFamily family = theorem4_family(k);
      json sizes = json::array();
      for (const auto& s : family.subsets) {
        sizes.push_back(s.size());
      }
      ce["subset_sizes"] = std::move(sizes);
      entry["counterexample"] = std::move(ce);
      break;
    }
  }
}

void print_summary_line(std::ostream& out, const json& entry) {
  char buf[512];
  const auto get = [&](const char* section, const char* key) -> std::string {
    if (entry.contains(section) && entry[section].contains(key)) {
      char num[32];
      std::snprintf(num, sizeof(num), "%9.4g", entry[section][key].get<double>());
      return num;
    }
    return "        -";
  };
  std::string pass = "-";
  int failed = 0;
  for (const auto& v : entry["verifications"]) {
    if (v.contains("failed") && v["failed"].get<bool>()) {
      ++failed;
    }
  }
  if (!entry["verifications"].empty()) {
    pass = failed == 0 ? "pass" : "FAIL";
  }
  std::string achieved = "        -";
  if (!entry["partitions"].empty() && entry["partitions"][0].contains("objective")) {
    char num[32];
    std::snprintf(num, sizeof(num), "%9.4g",
                  entry["partitions"][0]["objective"].get<double>());
    achieved = num;
  }
  std::snprintf(buf, sizeof(buf), "%4d %4d %5d %4d %s %s %s %s %s %s %s %s  %s\n",
                entry["index"].get<int>(), entry["rows"].get<int>(),
                entry["cols"].get<int>(), entry["rank"].get<int>(),
                get("conditions", "eps_entry_min").c_str(),
                get("conditions", "eps_row_min").c_str(),
                get("bounds_row", "gamma").c_str(), get("bounds_row", "psi").c_str(),
                get("bounds_entry", "bound_a").c_str(),
                get("bounds_entry", "bound_b").c_str(),
                get("bounds_entry", "bound_c").c_str(), achieved.c_str(), pass.c_str());
  out << buf;
}

}  // namespace

Task parse_task(std::string_view name) {
  if (name == "check-conditions") return Task::check_conditions;
  if (name == "best-partition") return Task::best_partition;
  if (name == "sign-partition") return Task::sign_partition;
  if (name == "balanced-partition") return Task::balanced_partition;
  if (name == "verify") return Task::verify;
  if (name == "counterexample") return Task::counterexample;
  if (name == "ensemble-sweep") return Task::ensemble_sweep;
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

const char* task_name(Task task) {
  switch (task) {
    case Task::check_conditions: return "check-conditions";
    case Task::best_partition: return "best-partition";
    case Task::sign_partition: return "sign-partition";
    case Task::balanced_partition: return "balanced-partition";
    case Task::verify: return "verify";
    case Task::counterexample: return "counterexample";
    case Task::ensemble_sweep: return "ensemble-sweep";
  }
  return "unknown";
}

json ExperimentConfig::to_json() const {
  return json{{"task", task_name(task)},
              {"q", q},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"input", input_path},
              {"format", format},
              {"ensemble", ensemble},
              {"N", big_n},
              {"n", n},
              {"count", count},
              {"seed", seed},
              {"has_seed", has_seed},
              {"method", method},
              {"out", output_path}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.task = parse_task(j.at("task").get<std::string>());
  c.q = j.at("q").get<double>();
  c.p = j.at("p").is_string() ? std::numeric_limits<double>::infinity()
                              : j.at("p").get<double>();
  c.input_path = j.at("input").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.ensemble = j.at("ensemble").get<std::string>();
  c.big_n = j.at("N").get<int>();
  c.n = j.at("n").get<int>();
  c.count = j.at("count").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.has_seed = j.at("has_seed").get<bool>();
  c.method = j.at("method").get<std::string>();
  c.output_path = j.at("out").get<std::string>();
  return c;
}

json run_experiment(const ExperimentConfig& config, std::ostream* summary) {
  validate_config(config);
  const auto t_start = std::chrono::steady_clock::now();

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["artifact_version"] = kVersion;
  report["config"] = config.to_json();
  report["matrices"] = json::array();

  const std::vector<MatrixSource> sources = collect_matrices(config);

  if (summary != nullptr) {
    *summary << " idx    N     n rank eps_entry   eps_row     gamma       psi   "
                "bound_a   bound_b   bound_c  objective  verdict\n";
  }

  int errors = 0;
  int failed = 0;
  std::vector<double> per_matrix_seconds;
  for (size_t idx = 0; idx < sources.size(); ++idx) {
    const auto t_matrix = std::chrono::steady_clock::now();
    json entry;
    entry["index"] = static_cast<int>(idx);
    entry["source"] = sources[idx].label;
    try {
      run_one_matrix(config, sources[idx].matrix, entry, static_cast<int>(idx));
    } catch (const std::exception& ex) {
      entry["error"] = ex.what();
      ++errors;
    }
    if (entry.contains("verifications")) {
      for (const auto& v : entry["verifications"]) {
        if (v.contains("failed") && v["failed"].get<bool>()) {
          ++failed;
        }
      }
    }
    per_matrix_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_matrix).count());
    if (summary != nullptr && entry.contains("rows")) {
      print_summary_line(*summary, entry);
    }
    report["matrices"].push_back(std::move(entry));
  }

  report["summary"] =
      json{{"matrices", sources.size()}, {"failed_verifications", failed}, {"errors", errors}};
  report["timing"] =
      json{{"total_seconds",
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count()},
           {"per_matrix_seconds", per_matrix_seconds}};
  return report;
}

int report_exit_code(const json& report) {
  if (!report.contains("summary")) {
    return 2;
  }
  return report["summary"]["failed_verifications"].get<int>() > 0 ? 1 : 0;
}

json report_without_timing(json report) {
  report.erase("timing");
  return report;
}

bool reverify_report(const json& report) {
  const ExperimentConfig config = ExperimentConfig::from_json(report.at("config"));
  const std::vector<MatrixSource> sources = collect_matrices(config);
  for (const auto& entry : report.at("matrices")) {
    const int idx = entry.at("index").get<int>();
    if (idx < 0 || idx >= static_cast<int>(sources.size())) {
      return false;
    }
    if (!entry.contains("partitions")) {
      continue;
    }
    const Matrix& a = sources[idx].matrix;
    for (const auto& pj : entry.at("partitions")) {
      const auto block1 = pj.at("block1").get<std::vector<int>>();
      const Partition p(a.rows(), block1);
      const std::string kind_name = pj.at("kind").get<std::string>();
      ObjectiveKind kind;
      if (kind_name == "one-q-ratio") {
        kind = ObjectiveKind::one_q_ratio;
      } else if (kind_name == "pointwise-ratio") {
        kind = ObjectiveKind::pointwise_ratio;
      } else if (kind_name == "column-discrepancy") {
        kind = ObjectiveKind::column_discrepancy;
      } else if (kind_name == "column-fraction") {
        kind = ObjectiveKind::column_fraction;
      } else {
        return false;
      }
      const double stored = pj.at("objective").get<double>();
      const double recomputed = evaluate_objective(a, p, kind, pj.at("q").get<double>());
      if (stored != recomputed) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace normsplit
