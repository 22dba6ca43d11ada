#include "rahgd/core/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": dimension mismatch " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

void Vector::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

bool Vector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool Vector::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vector& a) { return dot(a, a); }

double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

Vector axpy(double a, const Vector& x, const Vector& y) {
  Vector out = y;
  axpy_inplace(a, x, out);
  return out;
}

void axpy_inplace(double a, const Vector& x, Vector& y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double distance(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace rahgd
