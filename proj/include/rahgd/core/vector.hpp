#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rahgd {

/// Dense real vector with value semantics. Arithmetic between vectors of
/// different sizes throws DimensionError.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector zeros(std::size_t n) { return Vector(n, 0.0); }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  void set_zero();
  bool all_finite() const;
  bool is_zero() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double a);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);

void require_same_size(std::size_t a, std::size_t b, const char* where);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double norm_sq(const Vector& a);
/// Returns a*x + y.
Vector axpy(double a, const Vector& x, const Vector& y);
/// y <- a*x + y.
void axpy_inplace(double a, const Vector& x, Vector& y);
double distance(const Vector& a, const Vector& b);

}  // namespace rahgd
