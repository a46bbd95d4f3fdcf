#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthoreg/ortho.hpp"
#include "orthoreg/panel.hpp"
#include "orthoreg/regress.hpp"

namespace orthoreg {

/// Per-time propensity model structure. The numerator conditions on past
/// treatments only (or just an intercept); the denominator adds covariate
/// history, so its regressors are always a superset of the numerator's.
struct PropensitySpec {
  enum class CovariateHistory { full, current };
  bool intercept_only_numerator = false;
  CovariateHistory covariate_history = CovariateHistory::full;
  /// Coordinates of X_1 added to the denominator at every time point.
  std::vector<Index> baseline_coords;
  /// Treatment is an absorbing state; fit initiation models among the not yet
  /// treated and carry probability one afterwards.
  bool monotone = false;
};

struct IpwWeights {
  Vector values;  // per subject
  double mean = 0.0;
  double max = 0.0;
  double n_eff = 0.0;  // (sum w)^2 / sum w^2
  std::vector<std::string> warnings;
};

/// Stabilized inverse-probability-of-treatment weights from per-time logistic
/// fits. Requires binary treatments.
IpwWeights stabilized_weights(const PanelDataset& panel, const PropensitySpec& spec = {});

/// Marginal-model design: which treatment summaries enter, plus optional
/// baseline covariate coordinates (taken from X_1). Time-varying covariates
/// never enter.
struct MsmSpec {
  enum class Design { per_time_treatments, current_treatment, current_plus_cumavg };
  Design design = Design::per_time_treatments;
  std::vector<Index> baseline_coords;
  std::vector<double> time_grid;  // survival only; empty means 0..T-1
};

/// Plain regression of the outcome on the raw covariate and treatment history;
/// inconsistent in general and kept as the comparison foil.
CausalEstimate naive_fit(const PanelDataset& panel, Family y_family,
                         const CoxOptions& opts = {});

/// Weighted marginal-model fit (least squares or Cox) with the treatment
/// coefficients reported; inference is left to the bootstrap.
CausalEstimate ipw_msm_fit(const PanelDataset& panel, const IpwWeights& weights,
                           const MsmSpec& msm, Family y_family);

}  // namespace orthoreg
