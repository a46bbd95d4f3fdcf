#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orthoreg/panel.hpp"
#include "orthoreg/regress.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

/// Four observed standardized Gaussian variables (A1, X2, A2, Y) driven by a
/// latent U with unit loading on Y. Optional direct effects A1->Y, A2->Y.
class GaussianScm {
 public:
  GaussianScm(double rho_ax, double rho_xa, double rho_ux,
              std::optional<std::pair<double, double>> treatment_effects = std::nullopt);

  double rho_ax() const { return rho_ax_; }
  double rho_xa() const { return rho_xa_; }
  double rho_ux() const { return rho_ux_; }
  bool is_null() const { return !effects_.has_value(); }
  std::pair<double, double> effects() const { return effects_.value_or(std::make_pair(0.0, 0.0)); }

  /// Covariance of (A1, X2, A2, Y) implied by the structural equations.
  Matrix covariance() const;

  /// Panel with T=2: X_1 empty, then (X_2, A_2) and a continuous outcome.
  PanelDataset simulate_panel(Index n, std::uint64_t seed) const;

  /// One interventional outcome draw with (A1, A2) forced to abar.
  double draw_intervened(const Vector& abar, std::mt19937_64& rng) const;

 private:
  double rho_ax_, rho_xa_, rho_ux_;
  std::optional<std::pair<double, double>> effects_;
  double x_noise_sd_, a2_noise_sd_;
};

/// Closed-form population coefficients of the regression of Y on (A1, X2, A2)
/// for the null structure. Requires |rho_ax| < 1.
Eigen::Vector3d gaussian_naive_coeffs(const GaussianScm& scm);

/// Causal effects (theta_1, theta_2) recovered from the population regression
/// coefficients: theta_1 = beta_1 + rho_ax * lambda_2, theta_2 = beta_2.
Eigen::Vector2d gaussian_causal_theta(const GaussianScm& scm);

/// Finite-support sequential SCM with tabulated covariate and treatment laws
/// and a tabulated outcome mean. State indexing is mixed-radix over
/// (x_1, a_1, ..., x_T, a_T).
class DiscreteScm {
 public:
  DiscreteScm(std::vector<std::vector<double>> x_support,
              std::vector<std::vector<double>> a_support,
              std::vector<Matrix> p_x,  // rows: histories (x-bar_{t-1}, a-bar_{t-1})
              std::vector<Matrix> p_a,  // rows: histories (x-bar_t, a-bar_{t-1})
              Vector mu);               // indexed over full (x-bar, a-bar)

  static DiscreteScm from_json_file(const std::string& path);

  Index T() const { return static_cast<Index>(x_support_.size()); }
  const std::vector<double>& x_support(Index t) const { return x_support_[t - 1]; }
  const std::vector<double>& a_support(Index t) const { return a_support_[t - 1]; }

  double mu_at(const std::vector<Index>& x_idx, const std::vector<Index>& a_idx) const;
  double p_x_at(Index t, const std::vector<Index>& x_hist, const std::vector<Index>& a_hist,
                Index x_idx) const;
  double p_a_at(Index t, const std::vector<Index>& x_hist, const std::vector<Index>& a_hist,
                Index a_idx) const;

  /// E[X_t | history] from the covariate table.
  double conditional_mean_x(Index t, const std::vector<Index>& x_hist,
                            const std::vector<Index>& a_hist) const;

  /// All states with positive observational probability, as panel subjects
  /// whose outcome is the conditional mean, plus the joint pmf as weights.
  /// Together these realize exact population-level regression fits.
  std::pair<PanelDataset, Weights> population_panel() const;

  Index a_index(Index t, double value) const;

 private:
  std::vector<std::vector<double>> x_support_;
  std::vector<std::vector<double>> a_support_;
  std::vector<Matrix> p_x_;
  std::vector<Matrix> p_a_;
  Vector mu_;
  void validate() const;
};

/// Exact g-formula sum over covariate states under forced treatments.
double gformula_discrete(const DiscreteScm& scm, const std::vector<double>& abar);

struct McEstimate {
  double estimate = 0.0;
  double mc_se = 0.0;
};

/// Interventional simulator: one outcome draw under forced treatments.
using InterventionalMeanDraw = std::function<double(const Vector& abar, std::mt19937_64& rng)>;
/// Interventional simulator for survival: one event-time draw (no censoring).
using InterventionalTimeDraw = std::function<double(const Vector& abar, std::mt19937_64& rng)>;

/// Forced-treatment Monte Carlo mean with plug-in standard error. Trajectories
/// use per-index substreams, so the result is independent of evaluation order.
McEstimate gformula_monte_carlo(const InterventionalMeanDraw& dgp, const Vector& abar, Index n,
                                std::uint64_t seed);

struct McSurvivalCurve {
  std::vector<double> times;
  Vector survival;
  Vector mc_se;
};

McSurvivalCurve gformula_monte_carlo_survival(const InterventionalTimeDraw& dgp,
                                              const Vector& abar,
                                              const std::vector<double>& times, Index n,
                                              std::uint64_t seed);

struct LogisticMarginalCurve {
  Vector linear_predictor;  // beta' abar over the grid
  Vector psi;               // marginalized logistic values
  double sigma2 = 0.0;
  double probit_intercept = 0.0;
  double probit_slope = 0.0;
  Vector probit_fit;
  double sup_distance = 0.0;
};

/// Logistic threshold probability marginalized over N(0, sum lambda_t^2
/// sigma_t^2) noise, with the closest probit curve (least squares on the
/// probit scale) and their sup distance.
LogisticMarginalCurve marginalize_logistic(const Vector& beta, const Vector& lambda,
                                           const Vector& sigmas,
                                           const std::vector<Vector>& abar_grid);

/// Location-model SCM with a probit outcome; the marginal treatment-response
/// curve has a closed form used to validate the rescaled extraction.
struct ProbitLocationScm {
  Index T = 3;
  double alpha = 0.0;
  Vector beta;     // length T
  Vector lambda;   // length T
  Vector sigmas;   // residual sd per time
  double carry = 0.5;       // X_t on X_{t-1}
  double a_to_x = 0.7;      // X_t on A_{t-1}
  double x_to_a = 0.8;      // logistic slope of A_t on X_t

  double sigma2_total() const;
  double marginal_probability(const Vector& abar) const;  // Phi(alpha' + theta' abar)
  PanelDataset simulate_panel(Index n, std::uint64_t seed) const;
  double draw_intervened(const Vector& abar, std::mt19937_64& rng) const;
};

/// Location-model SCM whose hazard multiplier is fixed over time (the full
/// trajectory enters at baseline); its marginal survival is a log-normal
/// frailty mixture.
struct CoxLocationScm {
  Index T = 3;
  double base_hazard = 0.15;  // constant hazard rate; H0(t) = rate * t
  Vector beta;                // length T treatment log-hazard loadings
  Vector lambda;              // length T residual loadings
  Vector sigmas;              // residual sd per time
  double carry = 0.4;
  double a_to_x = 0.6;
  double x_to_a = 0.8;

  double sigma2_total() const;
  double cumulative_hazard(double t) const { return base_hazard * t; }
  PanelDataset simulate_panel(Index n, std::uint64_t seed, double censor_time) const;
  double draw_intervened_time(const Vector& abar, std::mt19937_64& rng) const;
};

}  // namespace orthoreg
