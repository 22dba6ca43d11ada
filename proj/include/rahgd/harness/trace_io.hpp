#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rahgd/solvers/report.hpp"

namespace rahgd {

/// Column order of every trace file.
const std::vector<std::string>& trace_columns();

/// printf("%.17g").
std::string format_double(double v);

void write_trace_csv(const std::filesystem::path& path, const RunReport& report);

struct TraceRow {
  std::int64_t epoch = 0;
  std::int64_t iter = 0;
  double hypergrad_norm = 0.0;
  double step_norm = 0.0;
  OracleCounters counters;
  double wall_ms = 0.0;
};

/// Throws ConfigError with a line diagnostic on malformed input.
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::string solver;
  std::uint64_t seed = 0;
  std::string termination;
  std::int64_t epochs = 0;
  std::int64_t outer_iters = 0;
  OracleCounters counters;
  double grad_norm = 0.0;        ///< NaN when not verified
  double grad_tol = 0.0;
  double lambda_min_est = 0.0;   ///< NaN when not verified
  bool fosp_pass = false;
  bool sosp_pass = false;
  double wall_ms = 0.0;
  std::vector<double> w_hat;
};

const std::vector<std::string>& summary_columns();
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

}  // namespace rahgd
