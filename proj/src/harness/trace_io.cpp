#include "rahgd/harness/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rahgd/core/errors.hpp"

namespace rahgd {

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols{"epoch", "iter", "hypergrad_norm", "step_norm", "gc_f",
                                             "gc_g",  "jv_g", "hv_g",           "wall_ms"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "solver", "seed",      "termination",    "epochs",    "outer_iters", "gc_f",    "gc_g", "jv_g",
      "hv_g",   "grad_norm", "grad_tol",       "lambda_min_est", "fosp_pass", "sosp_pass", "wall_ms", "w_hat"};
  return cols;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_header(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void bad(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) bad(path, line, "bad number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    bad(path, line, "bad number '" + s + "'");
  } catch (const std::out_of_range&) {
    bad(path, line, "number out of range '" + s + "'");
  }
}

std::uint64_t parse_count(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') bad(path, line, "bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(path, line, "bad integer '" + s + "'");
  }
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const RunReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << join_header(trace_columns()) << '\n';
  for (const TraceRecord& r : report.trace) {
    out << r.epoch << ',' << r.iter << ',' << format_double(r.hypergrad_norm) << ',' << format_double(r.step_norm)
        << ',' << r.counters.gc_f << ',' << r.counters.gc_g << ',' << r.counters.jv_g << ',' << r.counters.hv_g << ','
        << format_double(r.wall_ms) << '\n';
  }
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != join_header(trace_columns())) {
    bad(path, 1, "unexpected trace header");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != trace_columns().size()) bad(path, line_no, "expected 9 fields");
    TraceRow r;
    r.epoch = static_cast<std::int64_t>(parse_count(f[0], path, line_no));
    r.iter = static_cast<std::int64_t>(parse_count(f[1], path, line_no));
    r.hypergrad_norm = parse_real(f[2], path, line_no);
    r.step_norm = parse_real(f[3], path, line_no);
    r.counters.gc_f = parse_count(f[4], path, line_no);
    r.counters.gc_g = parse_count(f[5], path, line_no);
    r.counters.jv_g = parse_count(f[6], path, line_no);
    r.counters.hv_g = parse_count(f[7], path, line_no);
    r.wall_ms = parse_real(f[8], path, line_no);
    rows.push_back(r);
  }
  return rows;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << join_header(summary_columns()) << '\n';
  for (const SummaryRow& r : rows) {
    std::string w;
    for (std::size_t i = 0; i < r.w_hat.size(); ++i) {
      if (i) w += ';';
      w += format_double(r.w_hat[i]);
    }
    out << r.solver << ',' << r.seed << ',' << r.termination << ',' << r.epochs << ',' << r.outer_iters << ','
        << r.counters.gc_f << ',' << r.counters.gc_g << ',' << r.counters.jv_g << ',' << r.counters.hv_g << ','
        << format_double(r.grad_norm) << ',' << format_double(r.grad_tol) << ',' << format_double(r.lambda_min_est)
        << ',' << (r.fosp_pass ? 1 : 0) << ',' << (r.sosp_pass ? 1 : 0) << ',' << format_double(r.wall_ms) << ','
        << w << '\n';
  }
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != join_header(summary_columns())) bad(path, 1, "unexpected summary header");
  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != summary_columns().size()) bad(path, line_no, "expected 16 fields");
    SummaryRow r;
    r.solver = f[0];
    r.seed = parse_count(f[1], path, line_no);
    r.termination = f[2];
    r.epochs = static_cast<std::int64_t>(parse_count(f[3], path, line_no));
    r.outer_iters = static_cast<std::int64_t>(parse_count(f[4], path, line_no));
    r.counters.gc_f = parse_count(f[5], path, line_no);
    r.counters.gc_g = parse_count(f[6], path, line_no);
    r.counters.jv_g = parse_count(f[7], path, line_no);
    r.counters.hv_g = parse_count(f[8], path, line_no);
    r.grad_norm = parse_real(f[9], path, line_no);
    r.grad_tol = parse_real(f[10], path, line_no);
    r.lambda_min_est = parse_real(f[11], path, line_no);
    r.fosp_pass = f[12] == "1";
    r.sosp_pass = f[13] == "1";
    r.wall_ms = parse_real(f[14], path, line_no);
    for (const std::string& s : split(f[15], ';')) {
      if (!s.empty()) r.w_hat.push_back(parse_real(s, path, line_no));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace rahgd
