#include "orthoreg/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "orthoreg/design.hpp"
#include "orthoreg/survival_design.hpp"

namespace orthoreg {

namespace {

std::string x_col(Index t, Index j) {
  return "x" + std::to_string(t) + "_" + std::to_string(j + 1);
}
std::string a_col(Index t) { return "a" + std::to_string(t); }

void require_binary_treatments(const PanelDataset& panel) {
  for (Index i = 0; i < panel.n(); ++i)
    for (Index t = 1; t <= panel.T(); ++t) {
      double a = panel.treatment(i, t);
      if (a != 0.0 && a != 1.0) throw DataError("treatments must be binary 0/1");
    }
}

// Logistic fit restricted to the rows where mask is true; predictions are
// filled for those rows only.
FitResult fit_logistic_subset(const DesignMatrix& X, const Vector& y,
                              const std::vector<bool>& mask, Vector& fitted, Index t) {
  Index m = 0;
  for (bool b : mask) m += b;
  if (m == 0) throw DataError("propensity fit at t=" + std::to_string(t) + ": no subjects at risk");
  DesignMatrix sub;
  sub.values.resize(m, X.cols());
  sub.column_names = X.column_names;
  sub.has_intercept = X.has_intercept;
  Vector suby(m);
  Index r = 0;
  for (Index i = 0; i < X.rows(); ++i)
    if (mask[i]) {
      sub.values.row(r) = X.values.row(i);
      suby[r] = y[i];
      ++r;
    }
  FitResult fit;
  try {
    fit = fit_glm(sub, suby, Family::logistic);
  } catch (const SeparationError& e) {
    throw SeparationError(std::string(e.what()) + " in propensity model", t);
  }
  Vector p = predict(fit, sub);
  r = 0;
  for (Index i = 0; i < X.rows(); ++i)
    if (mask[i]) fitted[i] = p[r++];
  return fit;
}

}  // namespace

IpwWeights stabilized_weights(const PanelDataset& panel, const PropensitySpec& spec) {
  require_binary_treatments(panel);
  const Index n = panel.n();
  const Index T = panel.T();

  IpwWeights out;
  out.values = Vector::Ones(n);
  bool extreme_warned = false;

  for (Index t = 1; t <= T; ++t) {
    // Denominator design: covariate history, baseline coordinates, past treatments.
    DesignMatrix den = DesignMatrix::with_intercept(n);
    for (Index b : spec.baseline_coords) {
      if (b < 0 || b >= panel.covariate_dims()[0])
        throw DataError("stabilized_weights: baseline coordinate out of range");
      den.add_column("base" + std::to_string(b + 1), panel.covariates(1).col(b));
    }
    Index s_lo = spec.covariate_history == PropensitySpec::CovariateHistory::full ? 1 : t;
    for (Index s = s_lo; s <= t; ++s)
      for (Index j = 0; j < panel.covariate_dims()[s - 1]; ++j) {
        bool is_baseline = s == 1 && std::find(spec.baseline_coords.begin(),
                                               spec.baseline_coords.end(),
                                               j) != spec.baseline_coords.end();
        if (!is_baseline) den.add_column(x_col(s, j), panel.covariates(s).col(j));
      }
    DesignMatrix num = DesignMatrix::with_intercept(n);
    if (!spec.intercept_only_numerator)
      for (Index s = 1; s < t; ++s) num.add_column(a_col(s), panel.treatments().col(s - 1));
    for (Index s = 1; s < t; ++s) den.add_column(a_col(s), panel.treatments().col(s - 1));

    Vector a = panel.treatments().col(t - 1);
    std::vector<bool> at_risk(n, true);
    if (spec.monotone && t > 1)
      for (Index i = 0; i < n; ++i) at_risk[i] = panel.treatment(i, t - 1) == 0.0;
    bool any_at_risk = false;
    for (bool b : at_risk) any_at_risk = any_at_risk || b;

    Vector p_num = Vector::Ones(n), p_den = Vector::Ones(n);
    if (any_at_risk) {
      if (spec.monotone && t > 1) {
        // Drop past-treatment columns: they are constant zero among the at-risk.
        DesignMatrix den_m = DesignMatrix::with_intercept(n);
        for (Index c = 1; c < den.cols(); ++c) {
          const std::string& name = den.column_names[c];
          if (name.rfind("a", 0) == 0 && name.find('_') == std::string::npos) continue;
          den_m.add_column(name, den.values.col(c));
        }
        DesignMatrix num_m = DesignMatrix::with_intercept(n);
        fit_logistic_subset(den_m, a, at_risk, p_den, t);
        fit_logistic_subset(num_m, a, at_risk, p_num, t);
      } else {
        fit_logistic_subset(den, a, std::vector<bool>(n, true), p_den, t);
        fit_logistic_subset(num, a, std::vector<bool>(n, true), p_num, t);
      }
    }

    for (Index i = 0; i < n; ++i) {
      double pn, pd;
      if (spec.monotone && t > 1 && !at_risk[i]) {
        pn = pd = 1.0;  // treatment continues deterministically
      } else {
        pn = a[i] == 1.0 ? p_num[i] : 1.0 - p_num[i];
        pd = a[i] == 1.0 ? p_den[i] : 1.0 - p_den[i];
      }
      if (pd < 1e-6 && !extreme_warned) {
        out.warnings.push_back("fitted propensity below 1e-6 at t=" + std::to_string(t) +
                               "; weights may be extreme");
        extreme_warned = true;
      }
      out.values[i] *= pn / std::max(pd, 1e-12);
    }
  }

  out.mean = out.values.mean();
  out.max = out.values.maxCoeff();
  double sw = out.values.sum(), sw2 = out.values.squaredNorm();
  out.n_eff = sw2 > 0.0 ? sw * sw / sw2 : 0.0;
  if (out.mean < 0.5 || out.mean > 2.0)
    out.warnings.push_back("stabilized weight mean " + std::to_string(out.mean) +
                           " outside (0.5, 2); check the propensity models");
  return out;
}

CausalEstimate naive_fit(const PanelDataset& panel, Family y_family, const CoxOptions& opts) {
  CausalEstimate est;
  est.estimator = EstimatorTag::naive;
  est.family = y_family;
  const Index T = panel.T();

  if (y_family == Family::cox) {
    std::vector<Matrix> raw;
    for (Index t = 1; t <= T; ++t) raw.push_back(panel.covariates(t));
    SurvivalDesign design = build_survival_design(panel, raw, "x", opts, true, true);
    FitResult fit = fit_cox(design.rows, design.column_names);
    std::vector<double> theta;
    for (std::size_t c = 0; c < fit.column_names.size(); ++c)
      if (fit.column_names[c] == "a" || fit.column_names[c] == "cumavg_a") {
        est.names.push_back(fit.column_names[c]);
        theta.push_back(fit.coefficients[static_cast<Index>(c)]);
      }
    est.theta = Eigen::Map<Vector>(theta.data(), static_cast<Index>(theta.size()));
    return est;
  }

  DesignMatrix X = DesignMatrix::with_intercept(panel.n());
  for (Index t = 1; t <= T; ++t) {
    for (Index j = 0; j < panel.covariate_dims()[t - 1]; ++j)
      X.add_column(x_col(t, j), panel.covariates(t).col(j));
    X.add_column(a_col(t), panel.treatments().col(t - 1));
  }
  const Vector& y = panel.outcome_values();
  FitResult fit = y_family == Family::ols ? fit_ols(X, y) : fit_glm(X, y, y_family);
  est.theta.resize(T);
  for (Index t = 1; t <= T; ++t) {
    est.theta[t - 1] = fit.coef(a_col(t));
    est.names.push_back(a_col(t));
  }
  est.alpha_prime = fit.coef("intercept");
  return est;
}

CausalEstimate ipw_msm_fit(const PanelDataset& panel, const IpwWeights& weights,
                           const MsmSpec& msm, Family y_family) {
  if (weights.values.size() != panel.n())
    throw DataError("ipw_msm_fit: weight length does not match panel");
  if ((weights.values.array() <= 0.0).any())
    throw DataError("ipw_msm_fit: weights must be positive");
  CausalEstimate est;
  est.estimator = EstimatorTag::ipw_msm;
  est.family = y_family;
  const Index T = panel.T();

  if (y_family == Family::cox) {
    CoxOptions opts;
    opts.time_grid = msm.time_grid;
    opts.baseline_coords = msm.baseline_coords;
    opts.cumavg = msm.design == MsmSpec::Design::current_plus_cumavg;
    std::vector<Matrix> raw;
    for (Index t = 1; t <= T; ++t) raw.push_back(panel.covariates(t));
    SurvivalDesign design = build_survival_design(panel, raw, "x", opts, false, true);
    Vector rw(design.rows.size());
    for (std::size_t r = 0; r < design.rows.size(); ++r)
      rw[static_cast<Index>(r)] = weights.values[design.row_subject[r]];
    FitResult fit = fit_cox(design.rows, design.column_names, Weights(rw));
    std::vector<double> theta;
    for (std::size_t c = 0; c < fit.column_names.size(); ++c)
      if (fit.column_names[c] == "a" || fit.column_names[c] == "cumavg_a") {
        est.names.push_back(fit.column_names[c]);
        theta.push_back(fit.coefficients[static_cast<Index>(c)]);
      }
    est.theta = Eigen::Map<Vector>(theta.data(), static_cast<Index>(theta.size()));
    return est;
  }

  if (y_family != Family::ols) throw DataError("ipw_msm_fit: family must be ols or cox");
  DesignMatrix X = DesignMatrix::with_intercept(panel.n());
  for (Index b : msm.baseline_coords)
    X.add_column("base" + std::to_string(b + 1), panel.covariates(1).col(b));
  switch (msm.design) {
    case MsmSpec::Design::per_time_treatments:
      for (Index t = 1; t <= T; ++t) X.add_column(a_col(t), panel.treatments().col(t - 1));
      break;
    case MsmSpec::Design::current_treatment:
    case MsmSpec::Design::current_plus_cumavg: {
      // Outcome models see the end-of-trajectory treatment summaries.
      X.add_column("a", panel.treatments().col(T - 1));
      if (msm.design == MsmSpec::Design::current_plus_cumavg) {
        Vector cum = panel.treatments().rowwise().mean();
        X.add_column("cumavg_a", cum);
      }
      break;
    }
  }
  FitResult fit = fit_ols(X, panel.outcome_values(), Weights(weights.values));
  std::vector<double> theta;
  for (std::size_t c = 0; c < fit.column_names.size(); ++c) {
    const std::string& name = fit.column_names[c];
    if (name.rfind("a", 0) == 0 || name.rfind("cumavg_a", 0) == 0) {
      est.names.push_back(name);
      theta.push_back(fit.coefficients[static_cast<Index>(c)]);
    }
  }
  est.theta = Eigen::Map<Vector>(theta.data(), static_cast<Index>(theta.size()));
  est.alpha_prime = fit.coef("intercept");
  return est;
}

}  // namespace orthoreg
