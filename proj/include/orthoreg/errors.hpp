#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace orthoreg {

/// Malformed input data (CSV parse errors, panel invariant violations, bad configs).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Design matrix is rank deficient. Carries the names of the dependent columns.
class SingularDesignError : public std::runtime_error {
 public:
  SingularDesignError(const std::string& msg, std::vector<std::string> dependent)
      : std::runtime_error(msg), dependent_columns(std::move(dependent)) {}
  std::vector<std::string> dependent_columns;
};

/// Complete or quasi-complete separation in a binary-response fit.
class SeparationError : public std::runtime_error {
 public:
  explicit SeparationError(const std::string& msg, long time_point = -1)
      : std::runtime_error(msg), time_point(time_point) {}
  long time_point;  // 1-based panel time when raised by a propensity fit, else -1
};

/// Partial likelihood increases without bound (coefficient escaping to infinity).
class MonotoneLikelihoodError : public std::runtime_error {
 public:
  explicit MonotoneLikelihoodError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Likelihood is flat in some direction; no unique maximizer exists.
class NonIdentifiableError : public std::runtime_error {
 public:
  explicit NonIdentifiableError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Too many bootstrap replicates failed to refit.
class BootstrapError : public std::runtime_error {
 public:
  explicit BootstrapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace orthoreg
