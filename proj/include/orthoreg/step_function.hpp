#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace orthoreg {

/// Nondecreasing right-continuous step function H with H(t) = 0 for t below the
/// first jump. Jump times must be strictly increasing.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> times, std::vector<double> increments)
      : times_(std::move(times)), cum_(increments.size()) {
    if (times_.size() != increments.size())
      throw std::invalid_argument("StepFunction: times/increments size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
      if (i > 0 && times_[i] <= times_[i - 1])
        throw std::invalid_argument("StepFunction: jump times must be strictly increasing");
      acc += increments[i];
      cum_[i] = acc;
    }
  }

  /// Value at t: sum of increments with jump time <= t.
  double operator()(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

  const std::vector<double>& jump_times() const { return times_; }
  double increment(std::size_t k) const { return k == 0 ? cum_[0] : cum_[k] - cum_[k - 1]; }
  std::size_t size() const { return times_.size(); }
  double total() const { return cum_.empty() ? 0.0 : cum_.back(); }

 private:
  std::vector<double> times_;
  std::vector<double> cum_;
};

}  // namespace orthoreg
