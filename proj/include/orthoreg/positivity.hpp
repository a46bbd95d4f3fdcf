#pragma once

#include <string>
#include <vector>

#include "orthoreg/panel.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

struct PositivityTimeReport {
  Index t = 0;           // 1-based
  bool fit_ok = false;
  std::string error;     // populated when the propensity fit failed
  double min_propensity = 0.0;
  double max_propensity = 0.0;
  double frac_outside = 0.0;  // fitted values outside [eps, 1-eps]
};

struct PositivityReport {
  double epsilon = 0.0;
  std::vector<PositivityTimeReport> per_time;
  /// Fraction outside the bounds pooled over time points with a successful fit.
  double overall_frac_outside = 0.0;
  bool any_failure = false;

  std::string to_string() const;
};

/// Fits a logistic propensity model of A_t on (x-bar_t, a-bar_{t-1}) per time
/// point and reports the range of fitted propensities. Fit failures (for
/// example separation) are recorded per time point and do not abort the rest.
PositivityReport check_positivity(const PanelDataset& panel, double epsilon);

}  // namespace orthoreg
