#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthoreg/design.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/panel.hpp"
#include "orthoreg/step_function.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

enum class Family { ols, poisson_log, probit, logistic, cox };

std::string family_name(Family f);
Family family_from_string(const std::string& s);

/// Nonnegative observation weights. Rejects NaN/inf, negatives, and all-zero.
struct Weights {
  Vector values;
  explicit Weights(Vector v);
  static Weights ones(Index n) { return Weights(Vector::Ones(n)); }
};

struct FitResult {
  Family family = Family::ols;
  Vector coefficients;
  std::vector<std::string> column_names;
  Matrix covariance;  // model-based: sigma2*(X'WX)^-1 for ols, inverse observed information otherwise
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  double sigma2 = 0.0;  // ols only: weighted residual mean square, RSS_w/(n-p)
  std::vector<std::string> warnings;

  double coef(const std::string& name) const;
  bool has_coef(const std::string& name) const;
};

/// Weighted least squares via column-pivoted QR. Rank deficiency is a hard
/// error naming the dependent columns; no silent pseudoinverse.
FitResult fit_ols(const DesignMatrix& X, const Vector& y,
                  const std::optional<Weights>& w = std::nullopt);

/// Fisher-scoring IRLS with step-halving for poisson_log / probit / logistic.
/// Covariance is the inverse observed information at the optimum.
FitResult fit_glm(const DesignMatrix& X, const Vector& y, Family family,
                  const std::optional<Weights>& w = std::nullopt);

/// Log-likelihood, score, and observed information at an arbitrary coefficient
/// value. Exposed so tests can check the analytic derivatives against finite
/// differences.
double glm_loglik(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                  const std::optional<Weights>& w = std::nullopt);
Vector glm_score(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                 const std::optional<Weights>& w = std::nullopt);
Matrix glm_information(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                       const std::optional<Weights>& w = std::nullopt);

/// Cox proportional hazards on counting-process rows, Breslow tie handling,
/// Newton iterations with step-halving. No intercept.
FitResult fit_cox(const std::vector<CountingProcessRow>& rows,
                  const std::vector<std::string>& column_names,
                  const std::optional<Weights>& w = std::nullopt);

double cox_loglik(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                  const std::optional<Weights>& w = std::nullopt);
Vector cox_score(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                 const std::optional<Weights>& w = std::nullopt);
Matrix cox_information(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                       const std::optional<Weights>& w = std::nullopt);

/// Breslow estimate of the baseline cumulative hazard of a converged cox fit.
StepFunction breslow_cumhaz(const FitResult& fit, const std::vector<CountingProcessRow>& rows,
                            const std::optional<Weights>& w = std::nullopt);

/// Fitted means for ols/glm fits; linear predictor for cox. Column names of X
/// must match the fit exactly.
Vector predict(const FitResult& fit, const DesignMatrix& X);

// Numerically stable normal helpers shared by probit fitting and the oracles.
double norm_pdf(double x);
double norm_cdf(double x);
double norm_logcdf(double x);
double norm_quantile(double p);

}  // namespace orthoreg
