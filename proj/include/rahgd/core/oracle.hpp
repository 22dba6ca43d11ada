#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rahgd/core/constants.hpp"
#include "rahgd/core/vector.hpp"

namespace rahgd {

/// Oracle call totals for one run.
struct OracleCounters {
  std::uint64_t gc_f = 0;  ///< gradient evaluations of f
  std::uint64_t gc_g = 0;  ///< gradient evaluations of g
  std::uint64_t jv_g = 0;  ///< Jacobian-vector products d2g/dxdy . v
  std::uint64_t hv_g = 0;  ///< Hessian-vector products d2g/dydy . v

  std::uint64_t gradient_total() const { return gc_f + gc_g; }
  std::uint64_t total() const { return gc_f + gc_g + jv_g + hv_g; }

  friend bool operator==(const OracleCounters&, const OracleCounters&) = default;
  friend OracleCounters operator-(const OracleCounters& a, const OracleCounters& b) {
    return {a.gc_f - b.gc_f, a.gc_g - b.gc_g, a.jv_g - b.jv_g, a.hv_g - b.hv_g};
  }
};

/// A nonconvex-strongly-convex bilevel problem
///   min_x Phi(x) = f(x, y*(x)),  y*(x) = argmin_y g(x, y)
/// exposed through first-order and matrix-free second-order oracles.
/// Implementations must be immutable after construction.
class BilevelProblem {
 public:
  virtual ~BilevelProblem() = default;

  virtual std::size_t dim_x() const = 0;
  virtual std::size_t dim_y() const = 0;

  virtual Vector grad_f_x(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_f_y(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_g_y(const Vector& x, const Vector& y) const = 0;
  /// d2g/dydy (x, y) applied to v in R^{d_y}.
  virtual Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const = 0;
  /// d2g/dxdy (x, y) applied to v in R^{d_y}; result in R^{d_x}.
  virtual Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const = 0;

  virtual SmoothnessConstants constants() const = 0;

  virtual std::optional<double> value_f(const Vector&, const Vector&) const { return std::nullopt; }
  virtual std::optional<double> value_g(const Vector&, const Vector&) const { return std::nullopt; }

  virtual std::string name() const = 0;
};

/// min_x max_y fbar(x, y) with fbar strongly concave in y.
class MinimaxProblem {
 public:
  virtual ~MinimaxProblem() = default;

  virtual std::size_t dim_x() const = 0;
  virtual std::size_t dim_y() const = 0;

  virtual Vector grad_fbar_x(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_fbar_y(const Vector& x, const Vector& y) const = 0;

  virtual SmoothnessConstants constants() const = 0;

  virtual std::optional<double> value(const Vector&, const Vector&) const { return std::nullopt; }

  virtual std::string name() const = 0;
};

/// Per-run accounting wrapper around a BilevelProblem. Every call checks
/// input dimensions and output finiteness and bumps exactly one counter.
/// Owned by one run at a time; the wrapped problem may be shared.
class BilevelOracle {
 public:
  explicit BilevelOracle(const BilevelProblem& problem) : problem_(&problem) {}

  std::size_t dim_x() const { return problem_->dim_x(); }
  std::size_t dim_y() const { return problem_->dim_y(); }
  SmoothnessConstants constants() const { return problem_->constants(); }
  const BilevelProblem& problem() const { return *problem_; }

  Vector grad_f_x(const Vector& x, const Vector& y);
  Vector grad_f_y(const Vector& x, const Vector& y);
  Vector grad_g_y(const Vector& x, const Vector& y);
  Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v);
  Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v);

  const OracleCounters& counters() const { return counters_; }

 private:
  void check_xy(const Vector& x, const Vector& y, const char* where) const;

  const BilevelProblem* problem_;
  OracleCounters counters_;
};

/// Accounting wrapper for MinimaxProblem. grad_fbar_x is booked as gc_f and
/// grad_fbar_y as gc_g; jv_g and hv_g never move.
class MinimaxOracle {
 public:
  explicit MinimaxOracle(const MinimaxProblem& problem) : problem_(&problem) {}

  std::size_t dim_x() const { return problem_->dim_x(); }
  std::size_t dim_y() const { return problem_->dim_y(); }
  SmoothnessConstants constants() const { return problem_->constants(); }
  const MinimaxProblem& problem() const { return *problem_; }

  Vector grad_fbar_x(const Vector& x, const Vector& y);
  Vector grad_fbar_y(const Vector& x, const Vector& y);

  const OracleCounters& counters() const { return counters_; }

 private:
  const MinimaxProblem* problem_;
  OracleCounters counters_;
};

}  // namespace rahgd
