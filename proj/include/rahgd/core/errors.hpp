#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rahgd {

/// Base class for recoverable solver/problem failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smoothness constants violate ell >= mu > 0 or related preconditions.
class ConstantsError : public Error {
 public:
  using Error::Error;
};

/// Invalid solver or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared in an iterate or an oracle output.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::int64_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

/// An adaptive inner loop hit its hard iteration cap.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// CG observed p^T A p <= 0.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector dimensions. This is a programming error, not a runtime condition.
class DimensionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rahgd
