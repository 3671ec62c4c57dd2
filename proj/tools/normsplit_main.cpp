#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "normsplit/runner.hpp"
#include "normsplit/version.hpp"

namespace {

double parse_exponent(const std::string& text, const char* flag) {
  if (text == "inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) {
      return value;
    }
  } catch (...) {
  }
  throw CLI::ValidationError(std::string(flag) + ": expected a number or 'inf'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Row partitions of matrices with controlled (p,q) operator norms"};
  app.set_version_flag("--version", normsplit::kVersion);

  std::string task;
  std::string q_text = "2";
  std::string p_text = "2";
  normsplit::ExperimentConfig config;

  app.add_option("--task", task,
                 "check-conditions | best-partition | sign-partition | "
                 "balanced-partition | verify | counterexample | ensemble-sweep")
      ->required();
  app.add_option("--q", q_text, "image-norm exponent q in [1,inf)");
  app.add_option("--p", p_text, "domain-norm exponent p in [1,inf] ('inf' accepted)");
  app.add_option("--input", config.input_path, "matrix file (csv or json)");
  app.add_option("--format", config.format, "input format: csv | json (default: extension)");
  app.add_option("--ensemble", config.ensemble,
                 "gaussian | orthonormal-columns | sign | theorem4");
  app.add_option("--N", config.big_n, "ensemble rows (theorem4: N = 2k)");
  app.add_option("--n", config.n, "ensemble columns");
  app.add_option("--count", config.count, "ensemble size (default 1)");
  auto* seed_opt = app.add_option("--seed", config.seed, "RNG seed (mandatory for stochastic tasks)");
  app.add_option("--method", config.method, "search mode: exact | heuristic");
  app.add_option("--out", config.output_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
    config.task = normsplit::parse_task(task);
    config.q = parse_exponent(q_text, "--q");
    config.p = parse_exponent(p_text, "--p");
    config.has_seed = seed_opt->count() > 0;
    if (config.task == normsplit::Task::counterexample && config.ensemble.empty() &&
        config.input_path.empty()) {
      config.ensemble = "theorem4";
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  nlohmann::json report;
  try {
    report = normsplit::run_experiment(config, &std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << config.output_path << "'\n";
      return 2;
    }
    out << report.dump(2) << '\n';
  }
  return normsplit::report_exit_code(report);
}
