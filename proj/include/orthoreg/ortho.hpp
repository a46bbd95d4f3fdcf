#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthoreg/panel.hpp"
#include "orthoreg/quadrature.hpp"
#include "orthoreg/regress.hpp"
#include "orthoreg/step_function.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

/// Panel with covariates replaced by the residuals of per-time regressions on
/// the full observed past. At t=1 the past is empty, so residuals are
/// mean-centered covariates.
struct OrthoPanel {
  PanelDataset base;
  std::vector<Matrix> residuals;                 // per t: n x d_t
  std::vector<std::vector<FitResult>> nuisance_fits;  // [t][coordinate]
  std::vector<Vector> residual_variances;        // per t: RSS/(n - p_t) per coordinate

  Index nuisance_fit_count() const;
};

OrthoPanel residualize(const PanelDataset& panel, Family x_family = Family::ols,
                       const std::optional<Weights>& w = std::nullopt);

/// Survival-design settings shared by the orthogonalized fit, the naive fit,
/// and weighted marginal fits.
struct CoxOptions {
  /// time_grid[t-1] is when (X_t, A_t) takes effect; empty means 0,1,...,T-1.
  std::vector<double> time_grid;
  /// Add running means over s <= t of the covariate block and of treatment.
  bool cumavg = false;
  /// Coordinates of X_1 treated as time-constant baseline columns. The
  /// remaining coordinate count must match every later time point.
  std::vector<Index> baseline_coords;
};

std::vector<double> effective_time_grid(const PanelDataset& panel, const CoxOptions& opts);

/// Fits Y on (X~_1, A_1, ..., X~_T, A_T) with intercept; for survival outcomes
/// fits a Cox model on counting-process rows where the time-t residual block
/// and A_t are in force on interval t.
FitResult ortho_fit(const OrthoPanel& op, Family y_family, const CoxOptions& opts = {},
                    const std::optional<Weights>& w = std::nullopt);

enum class EstimatorTag { ortho, naive, ipw_msm };
std::string estimator_tag_name(EstimatorTag tag);

struct CausalEstimate {
  Vector theta;
  std::vector<std::string> names;  // treatment column names theta refers to
  EstimatorTag estimator = EstimatorTag::ortho;
  Family family = Family::ols;
  std::optional<double> alpha_prime;   // marginal-model intercept, when defined
  std::optional<Vector> se;
  std::optional<Vector> ci_lower, ci_upper;
  double level = 0.0;
  std::optional<double> rescale_sigma2;  // probit only
  std::vector<std::string> warnings;
};

/// Total residual variance sum_t sum_coord lambda_{t,c}^2 sigma2_{t,c} implied
/// by the covariate coefficients of an orthogonalized fit.
double ortho_sigma2(const FitResult& fit, const OrthoPanel& op);

/// Reads the causal parameters off an orthogonalized fit. Probit coefficients
/// are shrunk by 1/sqrt(1 + sigma2).
CausalEstimate extract_causal(const FitResult& fit, const OrthoPanel& op,
                              const std::optional<Weights>& w = std::nullopt);

struct MarginalSurvivalCurve {
  Vector abar;
  std::vector<double> times;
  Vector survival;
  double sigma2 = 0.0;
  std::vector<std::string> warnings;
};

/// Mixture-of-hazards survival value: E_Z[ exp(-cumhaz * exp(Z)) ] with
/// Z ~ N(0, sigma2), by Gauss-Hermite quadrature.
double lognormal_frailty_survival(double cumhaz, double sigma2, const GaussHermite& rule);

/// Marginal survival curve under a forced treatment path abar (one entry per
/// panel time), combining the Breslow baseline hazard, the fitted treatment
/// coefficients, and the residual-variance mixture.
MarginalSurvivalCurve marginal_survival(const FitResult& fit, const OrthoPanel& op,
                                        const Vector& abar, const std::vector<double>& times,
                                        const CoxOptions& opts = {});

}  // namespace orthoreg
