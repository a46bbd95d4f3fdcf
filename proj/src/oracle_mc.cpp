#include <cmath>

#include "orthoreg/oracle.hpp"
#include "orthoreg/quadrature.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

McEstimate gformula_monte_carlo(const InterventionalMeanDraw& dgp, const Vector& abar, Index n,
                                std::uint64_t seed) {
  if (n <= 0) throw DataError("gformula_monte_carlo: n must be positive");
  double sum = 0.0, sumsq = 0.0;
  for (Index i = 0; i < n; ++i) {
    auto rng = substream(seed, "mc", static_cast<std::uint64_t>(i));
    double y = dgp(abar, rng);
    sum += y;
    sumsq += y * y;
  }
  McEstimate out;
  out.estimate = sum / static_cast<double>(n);
  double var = std::max(sumsq / static_cast<double>(n) - out.estimate * out.estimate, 0.0);
  out.mc_se = std::sqrt(var / static_cast<double>(n));
  return out;
}

McSurvivalCurve gformula_monte_carlo_survival(const InterventionalTimeDraw& dgp,
                                              const Vector& abar,
                                              const std::vector<double>& times, Index n,
                                              std::uint64_t seed) {
  if (n <= 0) throw DataError("gformula_monte_carlo_survival: n must be positive");
  McSurvivalCurve curve;
  curve.times = times;
  Vector counts = Vector::Zero(static_cast<Index>(times.size()));
  for (Index i = 0; i < n; ++i) {
    auto rng = substream(seed, "mc", static_cast<std::uint64_t>(i));
    double y = dgp(abar, rng);
    for (std::size_t k = 0; k < times.size(); ++k)
      if (y >= times[k]) counts[static_cast<Index>(k)] += 1.0;
  }
  curve.survival = counts / static_cast<double>(n);
  curve.mc_se.resize(curve.survival.size());
  for (Index k = 0; k < curve.survival.size(); ++k) {
    double p = curve.survival[k];
    curve.mc_se[k] = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
  }
  return curve;
}

LogisticMarginalCurve marginalize_logistic(const Vector& beta, const Vector& lambda,
                                           const Vector& sigmas,
                                           const std::vector<Vector>& abar_grid) {
  if (lambda.size() != sigmas.size())
    throw DataError("marginalize_logistic: lambda/sigma length mismatch");
  if (!beta.allFinite() || !lambda.allFinite() || !sigmas.allFinite())
    throw DataError("marginalize_logistic: non-finite inputs");

  LogisticMarginalCurve curve;
  curve.sigma2 = (lambda.array().square() * sigmas.array().square()).sum();
  const Index m = static_cast<Index>(abar_grid.size());
  curve.linear_predictor.resize(m);
  curve.psi.resize(m);

  // Heavier logistic tails want extra nodes relative to the probit mixtures.
  static const GaussHermite rule = gauss_hermite(256);
  auto logistic_cdf = [](double u) { return 1.0 / (1.0 + std::exp(-u)); };
  double sd = std::sqrt(std::max(curve.sigma2, 0.0));
  for (Index k = 0; k < m; ++k) {
    if (abar_grid[k].size() != beta.size())
      throw DataError("marginalize_logistic: abar entry dimension mismatch");
    double lp = beta.dot(abar_grid[k]);
    curve.linear_predictor[k] = lp;
    curve.psi[k] = sd == 0.0 ? logistic_cdf(lp)
                             : gauss_hermite_expectation(rule, 0.0, sd, [&](double z) {
                                 return logistic_cdf(lp + z);
                               });
  }

  // Closest probit curve: least squares of Phi^-1(psi) on the linear predictor.
  Vector q(m);
  for (Index k = 0; k < m; ++k) q[k] = norm_quantile(std::min(std::max(curve.psi[k], 1e-15), 1.0 - 1e-15));
  double mx = curve.linear_predictor.mean(), mq = q.mean();
  Vector dx = curve.linear_predictor.array() - mx;
  double sxx = dx.squaredNorm();
  if (sxx > 0.0) {
    curve.probit_slope = dx.dot(q) / sxx;
    curve.probit_intercept = mq - curve.probit_slope * mx;
  } else {
    curve.probit_slope = 0.0;
    curve.probit_intercept = mq;
  }
  curve.probit_fit.resize(m);
  curve.sup_distance = 0.0;
  for (Index k = 0; k < m; ++k) {
    curve.probit_fit[k] =
        norm_cdf(curve.probit_intercept + curve.probit_slope * curve.linear_predictor[k]);
    curve.sup_distance = std::max(curve.sup_distance,
                                  std::abs(curve.probit_fit[k] - curve.psi[k]));
  }
  return curve;
}

}  // namespace orthoreg
