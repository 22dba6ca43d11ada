#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rahgd/harness/experiment.hpp"
#include "rahgd/harness/stationarity.hpp"
#include "rahgd/harness/trace_io.hpp"
#include "rahgd/problems/quad_bilevel.hpp"
#include "rahgd/problems/wshape.hpp"

using namespace rahgd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rahgd_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_spec(in, "test.ini");
}

std::string spec_error(const std::string& text) {
  try {
    parse(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RAHGD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kQuadSpec = R"([experiment]
solver = rahgd
epsilon = 1e-3
seeds = 0, 1, 2
[problem]
type = quad_bilevel
dim_x = 5
dim_y = 3
problem_seed = 4
[solver]
rho_tilde_floor = 1
mode = adaptive
)";

}  // namespace

TEST_SUITE("spec parsing") {
  TEST_CASE("well-formed spec") {
    const ExperimentSpec s = parse(kQuadSpec);
    CHECK(s.solver == SolverKind::rahgd);
    CHECK(s.epsilon == 1e-3);
    CHECK((s.seeds == std::vector<std::uint64_t>{0, 1, 2}));
    CHECK(s.problem.type == "quad_bilevel");
    CHECK(s.problem.params.at("dim_x") == "5");
    CHECK(s.overrides.at("mode") == "adaptive");
    CHECK_FALSE(s.verify);
  }

  TEST_CASE("diagnostics name the field") {
    CHECK(spec_error("[experiment]\nsolver = newton\n").find("[experiment] solver") != std::string::npos);
    CHECK(spec_error("[experiment]\nepsilon = abc\n").find("[experiment] epsilon") != std::string::npos);
    CHECK(spec_error("[experiment]\nepsilon = -1\n").find("epsilon") != std::string::npos);
    CHECK(spec_error("[experiment]\nseeds = 1.5\n").find("seeds") != std::string::npos);
    CHECK(spec_error("[experiment]\ncolour = red\n").find("[experiment] colour: unknown key") != std::string::npos);
    CHECK(spec_error("[solver]\nspeed = 3\n").find("[solver] speed") != std::string::npos);
    CHECK(spec_error("[problem]\ntype = rosenbrock\n").find("[problem] type") != std::string::npos);
    CHECK(spec_error("[problem]\ntype = quad_bilevel\ndim_x = 0\n").find("[problem] dim_x") != std::string::npos);
    CHECK(spec_error("[problem]\ntype = wshape\nx0 = 1, 2\n").find("[problem] x0") != std::string::npos);
    CHECK(spec_error("[problem]\ntype = hyperclean\nbackend = gpu\n").find("backend") != std::string::npos);
    CHECK(spec_error("[extras]\na = 1\n").find("unknown section") != std::string::npos);
    CHECK(spec_error("[experiment\nsolver = rahgd\n").find("test.ini:") != std::string::npos);
  }

  TEST_CASE("solver overrides are validated at resolution") {
    ExperimentSpec s = parse(std::string(kQuadSpec) + "theta = 2\n");
    const BuiltProblem p = build_problem(s.problem);
    CHECK_THROWS_AS(resolve_config(s, p, 0), SpecError);
    s = parse(std::string(kQuadSpec) + "schedule = cubic\n");
    CHECK_THROWS_AS(resolve_config(s, p, 0), SpecError);
    s.overrides.erase("schedule");
    s.overrides["mode"] = "lazy";
    CHECK_THROWS_AS(resolve_config(s, p, 0), SpecError);
  }

  TEST_CASE("constant replacements feed the schedule only") {
    ExperimentSpec s = parse(kQuadSpec);
    s.overrides["l_tilde"] = "8";
    s.overrides["rho_tilde"] = "0";
    s.overrides["rho_tilde_floor"] = "0.5";
    const BuiltProblem p = build_problem(s.problem);
    const DerivedConstants dc = resolve_constants(s, p);
    CHECK(dc.l_tilde == 8.0);
    CHECK(dc.rho_tilde == 0.5);
    const SolverConfig cfg = resolve_config(s, p, 0);
    CHECK(cfg.eta == 1.0 / 32.0);
    // inner parameters still come from the problem's declared constants
    CHECK(cfg.alpha == 1.0 / p.bilevel->constants().ell);
    s.overrides["l_tilde"] = "-1";
    CHECK_THROWS_AS(resolve_constants(s, p), SpecError);
  }

  TEST_CASE("stop_below keywords") {
    ExperimentSpec s = parse(kQuadSpec);
    const BuiltProblem p = build_problem(s.problem);
    CHECK_FALSE(resolve_config(s, p, 0).stop_below.has_value());
    s.overrides["stop_below"] = "certificate";
    const SolverConfig c = resolve_config(s, p, 0);
    REQUIRE(c.stop_below.has_value());
    CHECK(*c.stop_below == doctest::Approx(1e-3 - c.sigma));
    s.overrides["stop_below"] = "2.5e-4";
    CHECK(*resolve_config(s, p, 0).stop_below == 2.5e-4);
    s.overrides["stop_below"] = "soon";
    CHECK_THROWS_AS(resolve_config(s, p, 0), SpecError);

    s.solver = SolverKind::baseline_hgd;
    s.overrides.erase("stop_below");
    CHECK(*resolve_hgd_config(s, p).stop_below == doctest::Approx(1e-3 - 1e-6));
    s.overrides["stop_below"] = "none";
    CHECK_FALSE(resolve_hgd_config(s, p).stop_below.has_value());
  }

  TEST_CASE("minimax solvers need a minimax problem") {
    ExperimentSpec s = parse(kQuadSpec);
    s.solver = SolverKind::pragda;
    CHECK_THROWS_AS(resolve_config(s, build_problem(s.problem), 0), SpecError);
  }

  TEST_CASE("built-in problem registry") {
    for (const auto& info : builtin_problems()) {
      ProblemSpec ps;
      ps.type = info.name;
      if (info.name == "hyperclean" || info.name == "hyperopt") {
        ps.params = {{"n_train", "12"}, {"n_val", "8"}, {"features", "3"}, {"classes", "2"}};
      }
      const BuiltProblem b = build_problem(ps);
      REQUIRE(b.bilevel);
      CHECK(b.x0.size() == b.bilevel->dim_x());
    }
  }
}

TEST_SUITE("trace io") {
  TEST_CASE("schema is pinned") {
    CHECK((trace_columns() == std::vector<std::string>{"epoch", "iter", "hypergrad_norm", "step_norm", "gc_f", "gc_g",
                                                       "jv_g", "hv_g", "wall_ms"}));
    CHECK(summary_columns().front() == "solver");
  }

  TEST_CASE("%.17g round trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.123456789}) {
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("trace write/read round trip and malformed rows") {
    const fs::path dir = scratch("io");
    RunReport rep;
    for (int i = 0; i < 3; ++i) {
      TraceRecord r;
      r.epoch = i / 2;
      r.iter = i % 2;
      r.hypergrad_norm = 0.1 * (i + 1);
      r.step_norm = 1.0 / 3.0;
      r.counters = {static_cast<std::uint64_t>(i + 1), 10u * (i + 1), 1, 2};
      rep.trace.push_back(r);
    }
    write_trace_csv(dir / "t.csv", rep);
    const auto rows = read_trace_csv(dir / "t.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].epoch == 1);
    CHECK(rows[1].hypergrad_norm == 0.2);
    CHECK(rows[2].step_norm == 1.0 / 3.0);
    CHECK((rows[2].counters == OracleCounters{3, 30, 1, 2}));

    std::ofstream(dir / "bad.csv") << "epoch,iter\n1,2\n";
    CHECK_THROWS_AS(read_trace_csv(dir / "bad.csv"), ConfigError);
    std::ofstream(dir / "bad2.csv") << slurp(dir / "t.csv") << "0,0,x,0,0,0,0,0,0\n";
    CHECK_THROWS_AS(read_trace_csv(dir / "bad2.csv"), ConfigError);
    fs::remove_all(dir);
  }
}

TEST_SUITE("run_experiment") {
  TEST_CASE("one trace per seed plus a summary, byte-identical reruns") {
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    ExperimentSpec s = parse(kQuadSpec);
    s.output = a;
    std::ostringstream log;
    REQUIRE(run_experiment(s, log) == exit_ok);
    s.output = b;
    REQUIRE(run_experiment(s, log) == exit_ok);
    std::size_t traces = 0;
    for (const auto& e : fs::directory_iterator(a)) traces += e.path().filename().string().rfind("trace_", 0) == 0;
    CHECK(traces == 3);
    CHECK(fs::exists(a / "summary.csv"));
    for (int seed = 0; seed < 3; ++seed) {
      const std::string name = "trace_rahgd_seed" + std::to_string(seed) + ".csv";
      CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));

    const auto summary = read_summary_csv(a / "summary.csv");
    REQUIRE(summary.size() == 3);
    for (const auto& row : summary) {
      const auto rows = read_trace_csv(a / ("trace_rahgd_seed" + std::to_string(row.seed) + ".csv"));
      CHECK((row.counters == rows.back().counters));
      CHECK(row.outer_iters == static_cast<std::int64_t>(rows.size()));
      CHECK(std::isnan(row.grad_norm));
      CHECK(row.wall_ms == 0.0);
    }
    std::ostringstream report;
    CHECK(verify_trace_dir(a, report) == exit_ok);
    CHECK(report.str().find(",no") == std::string::npos);

    // a tampered trace is detected
    std::string text = slurp(a / "trace_rahgd_seed1.csv");
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    std::ofstream(a / "trace_rahgd_seed1.csv", std::ios::binary) << text;
    std::ostringstream report2;
    CHECK(verify_trace_dir(a, report2) != exit_ok);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("verification is recorded and does not touch solver counters") {
    const fs::path a = scratch("verify_a"), b = scratch("verify_b");
    ExperimentSpec s = parse(kQuadSpec);
    s.seeds = {0};
    s.output = a;
    std::ostringstream log;
    REQUIRE(run_experiment(s, log) == exit_ok);
    s.verify = true;
    s.output = b;
    REQUIRE(run_experiment(s, log) == exit_ok);
    const auto plain = read_summary_csv(a / "summary.csv");
    const auto verified = read_summary_csv(b / "summary.csv");
    CHECK((plain[0].counters == verified[0].counters));
    CHECK(slurp(a / "trace_rahgd_seed0.csv") == slurp(b / "trace_rahgd_seed0.csv"));
    CHECK(verified[0].grad_norm <= 83e-3);
    CHECK(verified[0].grad_tol == doctest::Approx(1e-5));
    CHECK(verified[0].lambda_min_est == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(verified[0].fosp_pass == (verified[0].grad_norm + verified[0].grad_tol <= 1e-3));
    CHECK(std::isnan(plain[0].lambda_min_est));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("exit codes: divergence and wall clock") {
    const fs::path dir = scratch("exits");
    ExperimentSpec s = parse(kQuadSpec);
    s.output = dir;
    s.overrides["eta"] = "1e300";
    s.overrides["big_b"] = "1e300";
    std::ostringstream log;
    CHECK(run_experiment(s, log) == exit_divergence);
    CHECK(read_summary_csv(dir / "summary.csv").front().termination == "diverged");

    ExperimentSpec slow = parse(kQuadSpec);
    slow.output = dir;
    slow.solver = SolverKind::baseline_hgd;
    slow.overrides = {{"iters", "100000000"}, {"step", "0"}};
    slow.max_wall_seconds = 0.05;
    CHECK(run_experiment(slow, log) == exit_wall_clock);

    ExperimentSpec none = parse(kQuadSpec);
    none.seeds.clear();
    CHECK(run_experiment(none, log) == exit_bad_spec);
    fs::remove_all(dir);
  }

  TEST_CASE("pragda escapes the W-shape saddle while GDA stalls on the same budget") {
    const fs::path dir = scratch("wshape");
    ExperimentSpec s = parse(R"([experiment]
solver = pragda
epsilon = 1e-3
seeds = 0, 1
[problem]
type = wshape
[solver]
mode = adaptive
sigma = 1e-6
theta = 0.03
big_b = 1e-2
big_k = 3000
r = 1e-3
max_epochs = 100000
)");
    s.output = dir;
    std::ostringstream log;
    REQUIRE(run_experiment(s, log) == exit_ok);
    const auto pr = read_summary_csv(dir / "summary.csv");
    std::uint64_t budget = 0;
    for (const auto& row : pr) {
      CHECK(std::abs(row.w_hat[2]) > 0.1);
      budget = std::max(budget, row.counters.total());
    }
    ExperimentSpec g = parse("[experiment]\nsolver = baseline_gda\nseeds = 0, 1\n[problem]\ntype = wshape\n");
    g.output = dir;
    g.overrides["iters"] = std::to_string(budget / 2);
    REQUIRE(run_experiment(g, log) == exit_ok);
    for (const auto& row : read_summary_csv(dir / "summary.csv")) {
      CHECK(std::abs(row.w_hat[2]) < 0.01);
      CHECK(row.counters.total() <= budget);
    }
    fs::remove_all(dir);
  }
}

TEST_SUITE("stationarity") {
  TEST_CASE("quadratic: lambda_min = 1 and gradient certified") {
    QuadBilevelProblem p(random_quad_params(4, 3, 2));
    const DerivedConstants dc = derive_constants(p.constants());
    const StationarityReport r = verify_stationarity(p, p.x_star(), dc, 1e-3);
    CHECK(r.lambda_min_est == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.grad_norm <= r.grad_tol);
    CHECK(r.fosp_pass);
    CHECK(r.eig_iterations >= 200);
    CHECK(r.verification_counters.gc_g > 0);
  }

  TEST_CASE("W-shape origin: negative curvature along x3 in both views") {
    WShapeProblem p;
    const DerivedConstants mm = derive_minimax_constants(p.constants());
    const StationarityReport r = verify_stationarity(static_cast<const MinimaxProblem&>(p), Vector::zeros(3), mm, 1e-3);
    CHECK(r.lambda_min_est == doctest::Approx(-0.2).epsilon(0.1));
    CHECK(std::abs(r.lambda_min_est + 0.2) <= 0.02);
    CHECK(r.grad_norm <= r.grad_tol);
    const DerivedConstants bl = derive_constants(p.constants());
    const StationarityReport b = verify_stationarity(static_cast<const BilevelProblem&>(p), Vector::zeros(3), bl, 1e-3);
    CHECK(std::abs(b.lambda_min_est + 0.2) <= 0.02);
  }

  TEST_CASE("outer minimum of the W-shape is a second-order point") {
    WShapeProblem p;
    const DerivedConstants mm = derive_minimax_constants(p.constants());
    const StationarityReport r =
        verify_stationarity(static_cast<const MinimaxProblem&>(p), Vector{0.0, 0.0, 0.6}, mm, 1e-3);
    CHECK(r.fosp_pass);
    CHECK(r.sosp_pass);
    CHECK(r.lambda_min_est > 0.0);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("subcommands and exit codes") {
    const fs::path dir = scratch("cli");
    std::ofstream(dir / "good.ini") << kQuadSpec;
    std::ofstream(dir / "bad.ini") << "[experiment]\nsolver = nope\n";
    CHECK(run_cli("problems list") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("run " + (dir / "missing.ini").string()) == 1);
    CHECK(run_cli("run " + (dir / "bad.ini").string()) == 1);
    CHECK(run_cli("run " + (dir / "good.ini").string() + " --solver cubic") == 1);
    const fs::path out = dir / "out";
    CHECK(run_cli("run " + (dir / "good.ini").string() + " --seed 7 --seed 8 --out " + out.string() + " --verify") == 0);
    CHECK(fs::exists(out / "trace_rahgd_seed7.csv"));
    CHECK(fs::exists(out / "trace_rahgd_seed8.csv"));
    CHECK_FALSE(fs::exists(out / "trace_rahgd_seed0.csv"));
    const auto summary = read_summary_csv(out / "summary.csv");
    REQUIRE(summary.size() == 2);
    CHECK_FALSE(std::isnan(summary[0].grad_norm));
    CHECK(run_cli("verify " + out.string()) == 0);
    CHECK(run_cli("verify " + (dir / "nowhere").string()) == 1);
    fs::remove_all(dir);
  }
}
