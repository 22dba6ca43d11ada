#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rahgd/core/errors.hpp"
#include "rahgd/core/oracle.hpp"
#include "rahgd/solvers/baselines.hpp"
#include "rahgd/solvers/config.hpp"

namespace rahgd {

enum class SolverKind { rahgd, prahgd, pragda, baseline_hgd, baseline_gda };

std::string solver_name(SolverKind s);
std::optional<SolverKind> parse_solver(const std::string& s);

/// Malformed experiment specification; the message names the field.
class SpecError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct ProblemSpec {
  std::string type = "quad_bilevel";
  std::map<std::string, std::string> params;
};

struct ExperimentSpec {
  ProblemSpec problem;
  SolverKind solver = SolverKind::rahgd;
  double epsilon = 1e-3;
  std::map<std::string, std::string> overrides;  ///< [solver] section, raw
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output = "out";
  bool verify = false;
  std::optional<double> max_wall_seconds;
  bool record_wall_time = false;
};

/// INI text with sections [experiment], [problem], [solver]:
///   [experiment] solver, epsilon, seeds (comma list), output, verify, max_wall_seconds, record_wall_time
///   [problem]    type plus problem-specific keys (see builtin_problems)
///   [solver]     SolverConfig / baseline overrides
ExperimentSpec parse_spec(std::istream& in, const std::string& source = "<spec>");
ExperimentSpec load_spec(const std::filesystem::path& path);

/// A constructed problem with both views where available.
struct BuiltProblem {
  std::shared_ptr<const BilevelProblem> bilevel;
  std::shared_ptr<const MinimaxProblem> minimax;
  Vector x0;
  Vector y0;
};

struct ProblemInfo {
  std::string name;
  std::string description;
  std::vector<std::string> keys;
};
const std::vector<ProblemInfo>& builtin_problems();

BuiltProblem build_problem(const ProblemSpec& spec);

/// Schedule for the restarted solvers: fosp for rahgd, sosp for prahgd and
/// pragda (overridable with `schedule`), then explicit overrides.
SolverConfig resolve_config(const ExperimentSpec& spec, const BuiltProblem& problem, std::uint64_t seed);
HgdConfig resolve_hgd_config(const ExperimentSpec& spec, const BuiltProblem& problem);

/// Derived constants used by the schedule and the stationarity thresholds
/// (minimax forms for pragda/gda), after the `l_tilde` / `rho_tilde`
/// replacements and any `rho_tilde_floor`. Inner solves never see these.
DerivedConstants resolve_constants(const ExperimentSpec& spec, const BuiltProblem& problem);

enum ExitCode : int { exit_ok = 0, exit_bad_spec = 1, exit_divergence = 2, exit_wall_clock = 3 };

/// Runs every seed, writes trace_<solver>_seed<N>.csv per run and summary.csv.
int run_experiment(const ExperimentSpec& spec, std::ostream& log);

/// Recomputes per-run totals from the traces in `dir` and checks them against
/// summary.csv when present. Returns 0 when consistent.
int verify_trace_dir(const std::filesystem::path& dir, std::ostream& out);

}  // namespace rahgd
