#include "rahgd/core/oracle.hpp"

#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {
namespace {

Vector checked_output(Vector out, std::size_t expected, const char* what) {
  require_same_size(out.size(), expected, what);
  if (!out.all_finite()) throw DivergenceError(std::string("non-finite output from ") + what, -1);
  return out;
}

}  // namespace

void BilevelOracle::check_xy(const Vector& x, const Vector& y, const char* where) const {
  require_same_size(x.size(), problem_->dim_x(), where);
  require_same_size(y.size(), problem_->dim_y(), where);
}

Vector BilevelOracle::grad_f_x(const Vector& x, const Vector& y) {
  check_xy(x, y, "grad_f_x");
  ++counters_.gc_f;
  return checked_output(problem_->grad_f_x(x, y), dim_x(), "grad_f_x");
}

Vector BilevelOracle::grad_f_y(const Vector& x, const Vector& y) {
  check_xy(x, y, "grad_f_y");
  ++counters_.gc_f;
  return checked_output(problem_->grad_f_y(x, y), dim_y(), "grad_f_y");
}

Vector BilevelOracle::grad_g_y(const Vector& x, const Vector& y) {
  check_xy(x, y, "grad_g_y");
  ++counters_.gc_g;
  return checked_output(problem_->grad_g_y(x, y), dim_y(), "grad_g_y");
}

Vector BilevelOracle::hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) {
  check_xy(x, y, "hvp_g_yy");
  require_same_size(v.size(), dim_y(), "hvp_g_yy");
  ++counters_.hv_g;
  return checked_output(problem_->hvp_g_yy(x, y, v), dim_y(), "hvp_g_yy");
}

Vector BilevelOracle::jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) {
  check_xy(x, y, "jvp_g_xy");
  require_same_size(v.size(), dim_y(), "jvp_g_xy");
  ++counters_.jv_g;
  return checked_output(problem_->jvp_g_xy(x, y, v), dim_x(), "jvp_g_xy");
}

Vector MinimaxOracle::grad_fbar_x(const Vector& x, const Vector& y) {
  require_same_size(x.size(), dim_x(), "grad_fbar_x");
  require_same_size(y.size(), dim_y(), "grad_fbar_x");
  ++counters_.gc_f;
  return checked_output(problem_->grad_fbar_x(x, y), dim_x(), "grad_fbar_x");
}

Vector MinimaxOracle::grad_fbar_y(const Vector& x, const Vector& y) {
  require_same_size(x.size(), dim_x(), "grad_fbar_y");
  require_same_size(y.size(), dim_y(), "grad_fbar_y");
  ++counters_.gc_g;
  return checked_output(problem_->grad_fbar_y(x, y), dim_y(), "grad_fbar_y");
}

}  // namespace rahgd
