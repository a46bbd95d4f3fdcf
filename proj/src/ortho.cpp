#include "orthoreg/ortho.hpp"

#include <cmath>

#include "orthoreg/survival_design.hpp"

namespace orthoreg {

namespace {

std::string x_col(Index t, Index j) {
  return "x" + std::to_string(t) + "_" + std::to_string(j + 1);
}
std::string xtilde_col(Index t, Index j) {
  return "xtilde" + std::to_string(t) + "_" + std::to_string(j + 1);
}
std::string a_col(Index t) { return "a" + std::to_string(t); }

}  // namespace

std::string estimator_tag_name(EstimatorTag tag) {
  switch (tag) {
    case EstimatorTag::ortho: return "ortho";
    case EstimatorTag::naive: return "naive";
    case EstimatorTag::ipw_msm: return "ipw_msm";
  }
  return "?";
}

Index OrthoPanel::nuisance_fit_count() const {
  Index c = 0;
  for (const auto& fits : nuisance_fits) c += static_cast<Index>(fits.size());
  return c;
}

OrthoPanel residualize(const PanelDataset& panel, Family x_family,
                       const std::optional<Weights>& w) {
  if (x_family != Family::ols)
    throw DataError("residualize: only least-squares covariate models are supported");
  const Index n = panel.n();
  const Index T = panel.T();

  OrthoPanel op;
  op.base = panel;
  op.residuals.resize(T);
  op.nuisance_fits.resize(T);
  op.residual_variances.resize(T);

  for (Index t = 1; t <= T; ++t) {
    const Index d = panel.covariate_dims()[t - 1];
    op.residuals[t - 1].resize(n, d);
    op.residual_variances[t - 1].resize(d);
    if (d == 0) continue;

    // Regressors: intercept plus the full observed past. Empty past at t=1
    // leaves the intercept, so residuals are mean-centered covariates.
    DesignMatrix past = DesignMatrix::with_intercept(n);
    for (Index s = 1; s < t; ++s) {
      for (Index j = 0; j < panel.covariate_dims()[s - 1]; ++j)
        past.add_column(x_col(s, j), panel.covariates(s).col(j));
      past.add_column(a_col(s), panel.treatments().col(s - 1));
    }

    for (Index j = 0; j < d; ++j) {
      Vector y = panel.covariates(t).col(j);
      FitResult g = fit_ols(past, y, w);
      Vector fitted = past.values * g.coefficients;
      op.residuals[t - 1].col(j) = y - fitted;
      op.residual_variances[t - 1][j] = g.sigma2;
      op.nuisance_fits[t - 1].push_back(std::move(g));
    }
  }
  return op;
}

FitResult ortho_fit(const OrthoPanel& op, Family y_family, const CoxOptions& opts,
                    const std::optional<Weights>& w) {
  const PanelDataset& panel = op.base;
  const Index T = panel.T();

  if (y_family == Family::cox) {
    if (panel.outcome_kind() != OutcomeKind::survival)
      throw DataError("ortho_fit: cox requires a survival outcome");
    SurvivalDesign design =
        build_survival_design(panel, op.residuals, "xtilde", opts, true, true);
    std::optional<Weights> row_w;
    if (w) {
      Vector rw(design.rows.size());
      for (std::size_t r = 0; r < design.rows.size(); ++r)
        rw[static_cast<Index>(r)] = w->values[design.row_subject[r]];
      row_w = Weights(rw);
    }
    return fit_cox(design.rows, design.column_names, row_w);
  }

  switch (y_family) {
    case Family::ols:
      if (panel.outcome_kind() != OutcomeKind::continuous &&
          panel.outcome_kind() != OutcomeKind::count)
        throw DataError("ortho_fit: ols requires a continuous outcome");
      break;
    case Family::poisson_log:
      if (panel.outcome_kind() != OutcomeKind::count)
        throw DataError("ortho_fit: poisson_log requires a count outcome");
      break;
    case Family::probit:
    case Family::logistic:
      if (panel.outcome_kind() != OutcomeKind::binary)
        throw DataError("ortho_fit: binary families require a binary outcome");
      break;
    default:
      throw DataError("ortho_fit: unsupported family");
  }

  DesignMatrix X = DesignMatrix::with_intercept(panel.n());
  for (Index t = 1; t <= T; ++t) {
    for (Index j = 0; j < panel.covariate_dims()[t - 1]; ++j)
      X.add_column(xtilde_col(t, j), op.residuals[t - 1].col(j));
    X.add_column(a_col(t), panel.treatments().col(t - 1));
  }
  const Vector& y = panel.outcome_values();
  return y_family == Family::ols ? fit_ols(X, y, w) : fit_glm(X, y, y_family, w);
}

double ortho_sigma2(const FitResult& fit, const OrthoPanel& op) {
  const Index T = op.base.T();
  double s2 = 0.0;
  if (fit.family == Family::cox) {
    // Reconstruct the baseline/time-varying split of X_1 from the column names.
    std::vector<bool> is_base(op.base.covariate_dims()[0], false);
    for (const auto& name : fit.column_names) {
      if (name.rfind("cumavg_", 0) == 0)
        throw DataError("ortho_sigma2: cumulative-average designs are not supported here");
      if (name.rfind("base", 0) == 0) is_base[std::stol(name.substr(4)) - 1] = true;
    }
    std::vector<Index> tv_first;
    for (Index j = 0; j < op.base.covariate_dims()[0]; ++j)
      if (!is_base[j]) tv_first.push_back(j);

    for (std::size_t c = 0; c < fit.column_names.size(); ++c) {
      const std::string& name = fit.column_names[c];
      double lambda = fit.coefficients[static_cast<Index>(c)];
      if (name.rfind("base", 0) == 0) {
        Index j = std::stol(name.substr(4)) - 1;
        s2 += lambda * lambda * op.residual_variances[0][j];
      } else if (name.rfind("xtilde", 0) == 0) {
        Index j = std::stol(name.substr(6)) - 1;
        for (Index t = 1; t <= T; ++t) {
          Index coord = (t == 1) ? tv_first[j] : j;
          const Vector& v = op.residual_variances[t - 1];
          if (coord < v.size()) s2 += lambda * lambda * v[coord];
        }
      }
    }
    return s2;
  }
  for (Index t = 1; t <= T; ++t) {
    for (Index j = 0; j < static_cast<Index>(op.residual_variances[t - 1].size()); ++j) {
      std::string name = xtilde_col(t, j);
      if (!fit.has_coef(name)) continue;
      double lambda = fit.coef(name);
      s2 += lambda * lambda * op.residual_variances[t - 1][j];
    }
  }
  return s2;
}

CausalEstimate extract_causal(const FitResult& fit, const OrthoPanel& op,
                              const std::optional<Weights>& w) {
  CausalEstimate est;
  est.estimator = EstimatorTag::ortho;
  est.family = fit.family;
  const Index T = op.base.T();

  if (fit.family == Family::cox) {
    std::vector<double> theta;
    for (std::size_t c = 0; c < fit.column_names.size(); ++c) {
      const std::string& name = fit.column_names[c];
      if (name == "a" || name == "cumavg_a") {
        est.names.push_back(name);
        theta.push_back(fit.coefficients[static_cast<Index>(c)]);
      }
    }
    est.theta = Eigen::Map<Vector>(theta.data(), static_cast<Index>(theta.size()));
    return est;
  }

  Vector beta(T);
  for (Index t = 1; t <= T; ++t) {
    beta[t - 1] = fit.coef(a_col(t));
    est.names.push_back(a_col(t));
  }
  double alpha = fit.has_coef("intercept") ? fit.coef("intercept") : 0.0;

  switch (fit.family) {
    case Family::ols:
      est.theta = beta;
      est.alpha_prime = alpha;
      break;
    case Family::poisson_log: {
      est.theta = beta;
      // Marginal intercept absorbs the mean of exp(lambda' xtilde) over the
      // (possibly weighted) empirical residual distribution.
      Vector lp = Vector::Zero(op.base.n());
      for (Index t = 1; t <= T; ++t)
        for (Index j = 0; j < op.base.covariate_dims()[t - 1]; ++j)
          lp += fit.coef(xtilde_col(t, j)) * op.residuals[t - 1].col(j);
      Vector ew = lp.array().exp();
      double mean = w ? (w->values.dot(ew) / w->values.sum()) : ew.mean();
      est.alpha_prime = alpha + std::log(mean);
      break;
    }
    case Family::probit: {
      double s2 = ortho_sigma2(fit, op);
      double shrink = 1.0 / std::sqrt(1.0 + s2);
      est.theta = beta * shrink;
      est.alpha_prime = alpha * shrink;
      est.rescale_sigma2 = s2;
      break;
    }
    case Family::logistic:
      throw DataError(
          "extract_causal: logistic fits have no exact marginal form; "
          "use probit for a binary outcome");
    default:
      throw DataError("extract_causal: unsupported family");
  }
  return est;
}

double lognormal_frailty_survival(double cumhaz, double sigma2, const GaussHermite& rule) {
  if (cumhaz <= 0.0) return 1.0;
  if (sigma2 <= 0.0) return std::exp(-cumhaz);
  double sd = std::sqrt(sigma2);
  return gauss_hermite_expectation(rule, 0.0, sd,
                                   [&](double z) { return std::exp(-cumhaz * std::exp(z)); });
}

MarginalSurvivalCurve marginal_survival(const FitResult& fit, const OrthoPanel& op,
                                        const Vector& abar, const std::vector<double>& times,
                                        const CoxOptions& opts) {
  if (fit.family != Family::cox) throw DataError("marginal_survival: fit is not a cox fit");
  if (!fit.converged) throw DataError("marginal_survival: fit did not converge");
  if (opts.cumavg)
    throw DataError("marginal_survival: cumulative-average designs are not supported");
  const PanelDataset& panel = op.base;
  const Index T = panel.T();
  if (abar.size() != T) throw DataError("marginal_survival: abar must have one entry per time");

  SurvivalDesign design = build_survival_design(panel, op.residuals, "xtilde", opts, true, true);
  StepFunction H0 = breslow_cumhaz(fit, design.rows);

  MarginalSurvivalCurve curve;
  curve.abar = abar;
  curve.times = times;
  curve.sigma2 = ortho_sigma2(fit, op);
  if (curve.sigma2 < 0.0) {
    curve.warnings.push_back("nonpositive sigma2 truncated to 0");
    curve.sigma2 = 0.0;
  }

  // Treatment-weighted cumulative hazard: each baseline jump is scaled by the
  // forced treatment level in force on its interval.
  const auto grid = effective_time_grid(panel, opts);
  double theta_a = fit.coef("a");
  std::vector<double> jump_times = H0.jump_times();
  std::vector<double> weighted(jump_times.size());
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    double tau = jump_times[k];
    Index t = T;
    for (Index s = 1; s < T; ++s)
      if (tau <= grid[s]) {
        t = s;
        break;
      }
    weighted[k] = H0.increment(k) * std::exp(theta_a * abar[t - 1]);
  }
  StepFunction weighted_H0(jump_times, weighted);

  GaussHermite rule = gauss_hermite(64);
  curve.survival.resize(static_cast<Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i)
    curve.survival[static_cast<Index>(i)] =
        lognormal_frailty_survival(weighted_H0(times[i]), curve.sigma2, rule);
  return curve;
}

}  // namespace orthoreg
