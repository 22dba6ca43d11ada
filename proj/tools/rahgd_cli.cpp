#include <CLI11.hpp>
#include <iostream>

#include "rahgd/harness/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Restarted accelerated hypergradient solvers and experiment harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment spec");
  std::string spec_path;
  std::string solver;
  double epsilon = 0.0;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  bool verify = false;
  run->add_option("spec", spec_path, "Experiment spec file (INI)")->required();
  run->add_option("--solver", solver, "rahgd | prahgd | pragda | baseline_hgd | baseline_gda");
  run->add_option("--epsilon", epsilon, "Target accuracy")->check(CLI::PositiveNumber);
  run->add_option("--seed", seeds, "Seed (repeatable); replaces the spec's seed list");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--verify", verify, "Append stationarity checks to the summary");

  auto* verify_cmd = app.add_subcommand("verify", "Recompute run totals from trace files");
  std::string trace_dir;
  verify_cmd->add_option("trace-dir", trace_dir, "Directory with trace_*.csv")->required();

  auto* problems = app.add_subcommand("problems", "Built-in problems");
  problems->require_subcommand(1);
  auto* list = problems->add_subcommand("list", "List built-in problems and their keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rahgd::exit_bad_spec;
  }

  if (*run) {
    rahgd::ExperimentSpec spec;
    try {
      spec = rahgd::load_spec(spec_path);
      if (!solver.empty()) {
        const auto s = rahgd::parse_solver(solver);
        if (!s) throw rahgd::SpecError("--solver: unknown solver '" + solver + "'");
        spec.solver = *s;
      }
      if (epsilon > 0.0) spec.epsilon = epsilon;
      if (!seeds.empty()) spec.seeds = seeds;
      if (!out_dir.empty()) spec.output = out_dir;
      if (verify) spec.verify = true;
    } catch (const rahgd::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return rahgd::exit_bad_spec;
    }
    return rahgd::run_experiment(spec, std::cerr);
  }
  if (*verify_cmd) return rahgd::verify_trace_dir(trace_dir, std::cout);
  if (*list) {
    for (const auto& p : rahgd::builtin_problems()) {
      std::cout << p.name << "\n  " << p.description << "\n  keys:";
      for (const auto& k : p.keys) std::cout << ' ' << k;
      std::cout << '\n';
    }
    return 0;
  }
  return 0;
}
