#include "rahgd/harness/experiment.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "rahgd/harness/stationarity.hpp"
#include "rahgd/harness/trace_io.hpp"
#include "rahgd/problems/hyperclean.hpp"
#include "rahgd/problems/hyperopt.hpp"
#include "rahgd/problems/quad_bilevel.hpp"
#include "rahgd/problems/wshape.hpp"
#include "rahgd/solvers/restarted.hpp"

namespace rahgd {

std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::rahgd: return "rahgd";
    case SolverKind::prahgd: return "prahgd";
    case SolverKind::pragda: return "pragda";
    case SolverKind::baseline_hgd: return "baseline_hgd";
    case SolverKind::baseline_gda: return "baseline_gda";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver(const std::string& s) {
  for (SolverKind k : {SolverKind::rahgd, SolverKind::prahgd, SolverKind::pragda, SolverKind::baseline_hgd,
                       SolverKind::baseline_gda}) {
    if (solver_name(k) == s) return k;
  }
  return std::nullopt;
}

namespace {

using Fields = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw SpecError(where + ": expected a finite number, got '" + raw + "'");
}

std::int64_t to_int(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  // Accept integral reals such as 1e6.
  const double d = to_real(where, raw);
  if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  throw SpecError(where + ": expected an integer, got '" + raw + "'");
}

bool to_bool(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw SpecError(where + ": expected true/false, got '" + raw + "'");
}

std::vector<double> to_reals(const std::string& where, const std::string& raw) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), ';', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_real(where, tok));
  if (out.empty()) throw SpecError(where + ": expected a list of numbers");
  return out;
}

class FieldReader {
 public:
  FieldReader(const Fields& f, std::string section) : f_(f), section_(std::move(section)) {}

  bool has(const std::string& key) const { return f_.count(key) > 0; }
  std::string where(const std::string& key) const { return "[" + section_ + "] " + key; }

  double real(const std::string& key, double def) const { return has(key) ? to_real(where(key), f_.at(key)) : def; }
  std::int64_t integer(const std::string& key, std::int64_t def) const {
    return has(key) ? to_int(where(key), f_.at(key)) : def;
  }
  std::size_t count(const std::string& key, std::size_t def) const {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(def));
    if (v < 1) throw SpecError(where(key) + ": must be >= 1");
    return static_cast<std::size_t>(v);
  }
  bool boolean(const std::string& key, bool def) const { return has(key) ? to_bool(where(key), f_.at(key)) : def; }
  std::string text(const std::string& key, const std::string& def) const { return has(key) ? trim(f_.at(key)) : def; }

  Vector vec(const std::string& key, Vector def) const {
    if (!has(key)) return def;
    Vector v(to_reals(where(key), f_.at(key)));
    if (v.size() != def.size()) {
      throw SpecError(where(key) + ": expected " + std::to_string(def.size()) + " values, got " +
                      std::to_string(v.size()));
    }
    return v;
  }

  void allow_only(const std::vector<std::string>& keys) const {
    for (const auto& [k, v] : f_) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw SpecError(where(k) + ": unknown key");
    }
  }

 private:
  const Fields& f_;
  std::string section_;
};

const std::vector<std::string> kExperimentKeys{"solver", "epsilon", "seeds", "output", "verify", "max_wall_seconds",
                                               "record_wall_time"};
const std::vector<std::string> kSolverKeys{"schedule", "rho_tilde_floor", "zeta",      "c_const", "eta",
                                           "theta",    "big_b",           "big_k",     "alpha",   "beta",
                                           "sigma",    "r",               "chi",       "max_epochs",
                                           "mode",     "c_hat",           "inner_hard_cap", "delta_hat",
                                           "perturbation", "step",        "iters",     "stop_below",
                                           "step_x",   "step_y",          "l_tilde",   "rho_tilde"};

InnerMode to_mode(const std::string& where, const std::string& s) {
  if (s == "theory") return InnerMode::theory;
  if (s == "adaptive") return InnerMode::adaptive;
  throw SpecError(where + ": expected 'theory' or 'adaptive', got '" + s + "'");
}

KernelBackend to_backend(const std::string& where, const std::string& s) {
  if (s == "parallel") return KernelBackend::parallel;
  if (s == "serial") return KernelBackend::serial;
  throw SpecError(where + ": expected 'parallel' or 'serial', got '" + s + "'");
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SpecError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  std::map<std::string, Fields> sections;
  for (const auto& [name, sub] : tree) {
    if (name != "experiment" && name != "problem" && name != "solver") {
      throw SpecError(source + ": unknown section [" + name + "]");
    }
    if (sub.empty() && !sub.data().empty()) throw SpecError(source + ": key '" + name + "' outside a section");
    for (const auto& [key, value] : sub) sections[name][key] = value.data();
  }

  ExperimentSpec spec;
  const FieldReader ex(sections["experiment"], "experiment");
  ex.allow_only(kExperimentKeys);
  if (ex.has("solver")) {
    const auto s = parse_solver(ex.text("solver", ""));
    if (!s) throw SpecError(ex.where("solver") + ": unknown solver '" + ex.text("solver", "") + "'");
    spec.solver = *s;
  }
  spec.epsilon = ex.real("epsilon", spec.epsilon);
  if (!(spec.epsilon > 0.0)) throw SpecError(ex.where("epsilon") + ": must be positive");
  if (ex.has("seeds")) {
    spec.seeds.clear();
    for (double s : to_reals(ex.where("seeds"), sections["experiment"]["seeds"])) {
      if (s < 0 || s != std::floor(s)) throw SpecError(ex.where("seeds") + ": seeds must be nonnegative integers");
      spec.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  spec.output = ex.text("output", spec.output.string());
  spec.verify = ex.boolean("verify", false);
  if (ex.has("max_wall_seconds")) {
    spec.max_wall_seconds = ex.real("max_wall_seconds", 0.0);
    if (!(*spec.max_wall_seconds > 0.0)) throw SpecError(ex.where("max_wall_seconds") + ": must be positive");
  }
  spec.record_wall_time = ex.boolean("record_wall_time", false);

  Fields problem = sections["problem"];
  if (problem.count("type")) {
    spec.problem.type = trim(problem["type"]);
    problem.erase("type");
  }
  spec.problem.params = problem;

  const FieldReader sv(sections["solver"], "solver");
  sv.allow_only(kSolverKeys);
  spec.overrides = sections["solver"];

  // Validate problem keys and values early so malformed specs fail before any run.
  build_problem(spec.problem);
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path.string());
  return parse_spec(in, path.string());
}

const std::vector<ProblemInfo>& builtin_problems() {
  static const std::vector<ProblemInfo> list{
      {"quad_bilevel", "f = |x|^2/2 + b^T y, g = |y - A x|^2/2 with random A, b",
       {"dim_x", "dim_y", "a_scale", "problem_seed", "box_radius", "x0"}},
      {"wshape", "w(x3) - 10 y1^2 + x1 y1 - 5 y2^2 + x2 y2 (minimax, saddle at the origin)",
       {"eps_w", "l_w", "x0", "y0"}},
      {"bilinear", "wshape without the w(x3) term", {"x0", "y0"}},
      {"hyperclean", "sample-weight learning for softmax regression on synthetic corrupted labels",
       {"n_train", "n_val", "features", "classes", "corruption", "c_r", "data_seed", "w_box", "backend", "x0"}},
      {"hyperopt", "per-feature regularisation weights for softmax regression on synthetic data",
       {"n_train", "n_val", "features", "classes", "corruption", "data_seed", "lambda_box", "w_box", "backend",
        "x0"}},
  };
  return list;
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  const auto& list = builtin_problems();
  const auto it = std::find_if(list.begin(), list.end(), [&](const ProblemInfo& p) { return p.name == spec.type; });
  if (it == list.end()) throw SpecError("[problem] type: unknown problem '" + spec.type + "'");
  const FieldReader f(spec.params, "problem");
  f.allow_only(it->keys);

  BuiltProblem out;
  try {
    if (spec.type == "quad_bilevel") {
      QuadBilevelParams p = random_quad_params(f.count("dim_x", 3), f.count("dim_y", 5),
                                               static_cast<std::uint64_t>(f.integer("problem_seed", 0)),
                                               f.real("a_scale", 1.0));
      p.box_radius = f.real("box_radius", 10.0);
      const std::size_t dx = p.dim_x;
      out.bilevel = std::make_shared<QuadBilevelProblem>(std::move(p));
      out.x0 = f.vec("x0", Vector(dx, 1.0));
      out.y0 = Vector::zeros(out.bilevel->dim_y());
    } else if (spec.type == "wshape" || spec.type == "bilinear") {
      WShapeParams p;
      p.eps_w = f.real("eps_w", p.eps_w);
      p.l_w = f.real("l_w", p.l_w);
      auto w = std::make_shared<WShapeProblem>(p, spec.type == "wshape");
      out.bilevel = w;
      out.minimax = w;
      out.x0 = f.vec("x0", Vector{1e-3, 1e-3, 1e-16});
      out.y0 = f.vec("y0", Vector{0.0, 0.0});
    } else {
      const std::size_t d = f.count("features", 5);
      const std::size_t c = f.count("classes", 3);
      TrainValSplit data = synth_train_val(f.count("n_train", 100), f.count("n_val", 100), d, c,
                                           f.real("corruption", spec.type == "hyperclean" ? 0.3 : 0.0),
                                           static_cast<std::uint64_t>(f.integer("data_seed", 0)));
      const KernelBackend backend = to_backend(f.where("backend"), f.text("backend", "parallel"));
      if (spec.type == "hyperclean") {
        HypercleanParams p;
        p.corruption_rate = f.real("corruption", 0.3);
        p.c_r = f.real("c_r", p.c_r);
        p.w_box = f.real("w_box", p.w_box);
        p.backend = backend;
        p.train_set = std::move(data.train);
        p.val_set = std::move(data.val);
        out.bilevel = std::make_shared<HypercleanProblem>(std::move(p));
      } else {
        HyperoptParams p;
        p.lambda_box = f.real("lambda_box", p.lambda_box);
        p.w_box = f.real("w_box", p.w_box);
        p.backend = backend;
        p.train_set = std::move(data.train);
        p.val_set = std::move(data.val);
        out.bilevel = std::make_shared<HyperoptProblem>(std::move(p));
      }
      out.x0 = f.vec("x0", Vector::zeros(out.bilevel->dim_x()));
      out.y0 = Vector::zeros(out.bilevel->dim_y());
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError("[problem] " + std::string(e.what()));
  }
  return out;
}

namespace {

bool uses_minimax(SolverKind s) { return s == SolverKind::pragda || s == SolverKind::baseline_gda; }

const SmoothnessConstants problem_constants(const ExperimentSpec& spec, const BuiltProblem& problem) {
  if (uses_minimax(spec.solver)) {
    if (!problem.minimax) {
      throw SpecError("[experiment] solver: " + solver_name(spec.solver) + " requires a minimax problem");
    }
    return problem.minimax->constants();
  }
  return problem.bilevel->constants();
}

}  // namespace

DerivedConstants resolve_constants(const ExperimentSpec& spec, const BuiltProblem& problem) {
  const SmoothnessConstants sc = problem_constants(spec, problem);
  DerivedConstants dc = uses_minimax(spec.solver) ? derive_minimax_constants(sc) : derive_constants(sc);
  const FieldReader f(spec.overrides, "solver");
  // outer-schedule constants only; inner solves keep the problem's own
  if (f.has("l_tilde")) {
    dc.l_tilde = f.real("l_tilde", dc.l_tilde);
    if (!(dc.l_tilde > 0.0)) throw SpecError(f.where("l_tilde") + ": must be positive");
  }
  if (f.has("rho_tilde")) {
    dc.rho_tilde = f.real("rho_tilde", dc.rho_tilde);
    if (!(dc.rho_tilde >= 0.0)) throw SpecError(f.where("rho_tilde") + ": must be nonnegative");
  }
  if (f.has("rho_tilde_floor")) {
    const double floor = f.real("rho_tilde_floor", 0.0);
    if (!(floor >= 0.0)) throw SpecError(f.where("rho_tilde_floor") + ": must be nonnegative");
    dc = with_rho_tilde_floor(dc, floor);
  }
  return dc;
}

SolverConfig resolve_config(const ExperimentSpec& spec, const BuiltProblem& problem, std::uint64_t seed) {
  const FieldReader f(spec.overrides, "solver");
  const SmoothnessConstants sc = problem_constants(spec, problem);
  const DerivedConstants dc = resolve_constants(spec, problem);
  const std::string schedule = f.text("schedule", spec.solver == SolverKind::rahgd ? "fosp" : "sosp");

  SolverConfig cfg;
  try {
    if (schedule == "fosp") {
      cfg = default_config_fosp(dc, sc, spec.epsilon);
    } else if (schedule == "sosp") {
      const std::size_t dx = uses_minimax(spec.solver) ? problem.minimax->dim_x() : problem.bilevel->dim_x();
      cfg = default_config_sosp(dc, sc, spec.epsilon, f.real("zeta", 0.1), dx, f.real("c_const", 1.0));
    } else {
      throw SpecError(f.where("schedule") + ": expected 'fosp' or 'sosp', got '" + schedule + "'");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const ConfigError& e) {
    throw SpecError("[solver] schedule " + schedule + ": " + e.what());
  }

  cfg.eta = f.real("eta", cfg.eta);
  cfg.theta = f.real("theta", cfg.theta);
  cfg.big_b = f.real("big_b", cfg.big_b);
  cfg.big_k = f.integer("big_k", cfg.big_k);
  cfg.alpha = f.real("alpha", cfg.alpha);
  cfg.beta = f.real("beta", cfg.beta);
  cfg.sigma = f.real("sigma", cfg.sigma);
  cfg.r = f.real("r", cfg.r);
  cfg.zeta = f.real("zeta", cfg.zeta);
  cfg.chi = f.integer("chi", cfg.chi);
  cfg.c_const = f.real("c_const", cfg.c_const);
  cfg.perturbation = f.boolean("perturbation", cfg.perturbation);
  if (f.has("mode")) cfg.mode = to_mode(f.where("mode"), f.text("mode", ""));
  if (f.has("c_hat")) cfg.c_hat = f.real("c_hat", 1.0);
  cfg.inner_hard_cap = f.integer("inner_hard_cap", cfg.inner_hard_cap);
  if (f.has("delta_hat")) {
    cfg.delta_hat = f.real("delta_hat", 0.0);
    cfg.max_epochs = default_max_epochs(cfg.delta_hat, dc.rho_tilde, spec.epsilon);
  }
  cfg.max_epochs = f.integer("max_epochs", cfg.max_epochs);
  const std::string stop = f.text("stop_below", "none");
  if (stop == "certificate") {
    cfg.stop_below = spec.epsilon - cfg.sigma;
  } else if (stop != "none") {
    cfg.stop_below = f.real("stop_below", 0.0);
  }
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw SpecError(std::string("[solver] ") + e.what());
  }
  return cfg;
}

HgdConfig resolve_hgd_config(const ExperimentSpec& spec, const BuiltProblem& problem) {
  const FieldReader f(spec.overrides, "solver");
  const DerivedConstants dc = resolve_constants(spec, problem);
  HgdConfig cfg;
  cfg.step = f.real("step", 1.0 / dc.l_tilde);
  cfg.sigma = f.real("sigma", spec.epsilon * spec.epsilon);
  cfg.iters = f.integer("iters", 100'000);
  cfg.mode = f.has("mode") ? to_mode(f.where("mode"), f.text("mode", "")) : InnerMode::adaptive;
  cfg.big_b = f.real("big_b", 1.0);
  if (f.has("c_hat")) cfg.c_hat = f.real("c_hat", 1.0);
  cfg.inner_hard_cap = f.integer("inner_hard_cap", cfg.inner_hard_cap);
  const std::string stop_text = f.text("stop_below", "certificate");
  if (stop_text == "certificate") {
    if (spec.epsilon > cfg.sigma) cfg.stop_below = spec.epsilon - cfg.sigma;
  } else if (stop_text != "none") {
    cfg.stop_below = f.real("stop_below", 0.0);
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw SpecError(std::string("[solver] ") + e.what());
  }
  return cfg;
}

namespace {

struct RunOutcome {
  RunReport report;
  bool diverged = false;
  std::string error;
};

std::string trace_file_name(SolverKind s, std::uint64_t seed) {
  return "trace_" + solver_name(s) + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  using Clock = std::chrono::steady_clock;
  const auto begin = Clock::now();

  BuiltProblem problem;
  DerivedConstants dc;
  DerivedConstants dc_verify;
  std::vector<std::pair<std::uint64_t, SolverConfig>> configs;
  HgdConfig hgd;
  try {
    if (spec.seeds.empty()) throw SpecError("[experiment] seeds: at least one seed is required");
    problem = build_problem(spec.problem);
    dc = resolve_constants(spec, problem);
    // the power-method shift must dominate the Hessian even if l_tilde was lowered
    {
      const SmoothnessConstants sc = problem_constants(spec, problem);
      const DerivedConstants declared = uses_minimax(spec.solver) ? derive_minimax_constants(sc) : derive_constants(sc);
      dc_verify = dc;
      dc_verify.l_tilde = std::max(dc.l_tilde, declared.l_tilde);
    }
    for (std::uint64_t seed : spec.seeds) {
      if (spec.solver == SolverKind::baseline_hgd) {
        hgd = resolve_hgd_config(spec, problem);
      } else if (spec.solver != SolverKind::baseline_gda) {
        configs.emplace_back(seed, resolve_config(spec, problem, seed));
      }
    }
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return exit_bad_spec;
  }

  std::error_code ec;
  std::filesystem::create_directories(spec.output, ec);
  if (ec) {
    log << "error: cannot create output directory " << spec.output << ": " << ec.message() << '\n';
    return exit_bad_spec;
  }

  bool deadline_hit = false;
  auto deadline_passed = [&] {
    if (!spec.max_wall_seconds) return false;
    const double s = std::chrono::duration<double>(Clock::now() - begin).count();
    if (s > *spec.max_wall_seconds) deadline_hit = true;
    return deadline_hit;
  };
  RunControl control;
  control.stop_requested = deadline_passed;
  control.record_wall_time = spec.record_wall_time;

  const FieldReader f(spec.overrides, "solver");
  std::vector<SummaryRow> rows;
  bool any_divergence = false;

  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    const std::uint64_t seed = spec.seeds[i];
    if (deadline_passed()) break;
    const auto run_begin = Clock::now();
    RunOutcome out;
    try {
      switch (spec.solver) {
        case SolverKind::rahgd:
        case SolverKind::prahgd: {
          BilevelOracle oracle(*problem.bilevel);
          out.report = spec.solver == SolverKind::rahgd ? rahgd(oracle, problem.x0, configs[i].second, control)
                                                        : prahgd(oracle, problem.x0, configs[i].second, control);
          break;
        }
        case SolverKind::pragda: {
          MinimaxOracle oracle(*problem.minimax);
          out.report = pragda(oracle, problem.x0, configs[i].second, control);
          break;
        }
        case SolverKind::baseline_hgd: {
          BilevelOracle oracle(*problem.bilevel);
          out.report = baseline_hgd(oracle, problem.x0, hgd, control);
          break;
        }
        case SolverKind::baseline_gda: {
          MinimaxOracle oracle(*problem.minimax);
          const double sx = f.real("step_x", 1.0 / (4.0 * dc.l_tilde));
          const double sy = f.real("step_y", 1.0 / problem.minimax->constants().ell);
          const std::int64_t iters = f.integer("iters", 10'000);
          out.report = baseline_gda(oracle, problem.x0, problem.y0, sx, sy, iters, control);
          break;
        }
      }
    } catch (const SpecError& e) {
      log << "error: " << e.what() << '\n';
      return exit_bad_spec;
    } catch (const Error& e) {
      out.diverged = true;
      out.error = e.what();
    }

    const double run_ms = std::chrono::duration<double, std::milli>(Clock::now() - run_begin).count();
    SummaryRow row;
    row.solver = solver_name(spec.solver);
    row.seed = seed;
    row.grad_norm = std::numeric_limits<double>::quiet_NaN();
    row.lambda_min_est = std::numeric_limits<double>::quiet_NaN();
    row.wall_ms = spec.record_wall_time ? run_ms : 0.0;

    if (out.diverged) {
      any_divergence = true;
      row.termination = "diverged";
      log << solver_name(spec.solver) << " seed " << seed << ": aborted: " << out.error << '\n';
      rows.push_back(row);
      continue;
    }

    const RunReport& rep = out.report;
    write_trace_csv(spec.output / trace_file_name(spec.solver, seed), rep);
    row.termination = termination_name(rep.termination);
    row.epochs = rep.epochs;
    row.outer_iters = rep.total_outer_iters;
    row.counters = rep.counters;
    row.w_hat = rep.w_hat.values();

    if (spec.verify) {
      try {
        const StationarityReport st = uses_minimax(spec.solver)
                                          ? verify_stationarity(*problem.minimax, rep.w_hat, dc_verify, spec.epsilon)
                                          : verify_stationarity(*problem.bilevel, rep.w_hat, dc_verify, spec.epsilon);
        row.grad_norm = st.grad_norm;
        row.grad_tol = st.grad_tol;
        row.lambda_min_est = st.lambda_min_est;
        row.fosp_pass = st.fosp_pass;
        row.sosp_pass = st.sosp_pass;
      } catch (const Error& e) {
        log << solver_name(spec.solver) << " seed " << seed << ": verification failed: " << e.what() << '\n';
      }
    }
    log << solver_name(spec.solver) << " seed " << seed << ": " << row.termination << ", " << row.outer_iters
        << " iterations, gc_f=" << row.counters.gc_f << " gc_g=" << row.counters.gc_g
        << " jv_g=" << row.counters.jv_g << " hv_g=" << row.counters.hv_g << '\n';
    rows.push_back(std::move(row));
    if (rep.termination == Termination::stopped_by_control) break;
  }

  write_summary_csv(spec.output / "summary.csv", rows);
  if (any_divergence) return exit_divergence;
  if (deadline_hit) {
    log << "wall-clock limit of " << *spec.max_wall_seconds << " s reached\n";
    return exit_wall_clock;
  }
  return exit_ok;
}

int verify_trace_dir(const std::filesystem::path& dir, std::ostream& out) {
  if (!std::filesystem::is_directory(dir)) {
    out << "error: " << dir << " is not a directory\n";
    return exit_bad_spec;
  }
  std::vector<std::filesystem::path> traces;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string n = e.path().filename().string();
    if (n.rfind("trace_", 0) == 0 && e.path().extension() == ".csv") traces.push_back(e.path());
  }
  std::sort(traces.begin(), traces.end());

  std::vector<SummaryRow> summary;
  const bool have_summary = std::filesystem::exists(dir / "summary.csv");
  try {
    if (have_summary) summary = read_summary_csv(dir / "summary.csv");
  } catch (const ConfigError& e) {
    out << "error: " << e.what() << '\n';
    return exit_bad_spec;
  }

  int status = exit_ok;
  out << "file,rows,epochs,gc_f,gc_g,jv_g,hv_g,final_hypergrad_norm,summary_match\n";
  for (const auto& path : traces) {
    std::vector<TraceRow> rows;
    try {
      rows = read_trace_csv(path);
    } catch (const ConfigError& e) {
      out << "error: " << e.what() << '\n';
      status = exit_bad_spec;
      continue;
    }
    const OracleCounters last = rows.empty() ? OracleCounters{} : rows.back().counters;
    const std::int64_t epochs = rows.empty() ? 0 : rows.back().epoch + 1;
    std::string match = "n/a";
    if (have_summary) {
      const std::string stem = path.stem().string();  // trace_<solver>_seed<N>
      const auto pos = stem.rfind("_seed");
      const std::string solver = stem.substr(6, pos - 6);
      const std::uint64_t seed = std::stoull(stem.substr(pos + 5));
      const auto it = std::find_if(summary.begin(), summary.end(),
                                   [&](const SummaryRow& r) { return r.solver == solver && r.seed == seed; });
      if (it == summary.end()) {
        match = "missing";
        status = exit_bad_spec;
      } else {
        const bool ok = it->counters == last && it->outer_iters == static_cast<std::int64_t>(rows.size());
        match = ok ? "yes" : "no";
        if (!ok) status = exit_bad_spec;
      }
    }
    out << path.filename().string() << ',' << rows.size() << ',' << epochs << ',' << last.gc_f << ',' << last.gc_g
        << ',' << last.jv_g << ',' << last.hv_g << ','
        << format_double(rows.empty() ? 0.0 : rows.back().hypergrad_norm) << ',' << match << '\n';
  }
  return status;
}

}  // namespace rahgd
