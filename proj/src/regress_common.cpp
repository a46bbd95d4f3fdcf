#include <cmath>

#include "orthoreg/regress.hpp"

namespace orthoreg {

std::string family_name(Family f) {
  switch (f) {
    case Family::ols: return "ols";
    case Family::poisson_log: return "poisson_log";
    case Family::probit: return "probit";
    case Family::logistic: return "logistic";
    case Family::cox: return "cox";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "ols") return Family::ols;
  if (s == "poisson_log" || s == "poisson") return Family::poisson_log;
  if (s == "probit") return Family::probit;
  if (s == "logistic") return Family::logistic;
  if (s == "cox") return Family::cox;
  throw DataError("unknown family '" + s + "'");
}

Weights::Weights(Vector v) : values(std::move(v)) {
  if (values.size() == 0) throw DataError("weights are empty");
  if (!values.allFinite()) throw DataError("weights contain NaN/inf");
  if ((values.array() < 0.0).any()) throw DataError("weights must be nonnegative");
  if (values.maxCoeff() <= 0.0) throw DataError("weights are all zero");
}

double FitResult::coef(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i)
    if (column_names[i] == name) return coefficients[static_cast<Index>(i)];
  throw DataError("no coefficient named '" + name + "'");
}

bool FitResult::has_coef(const std::string& name) const {
  for (const auto& c : column_names)
    if (c == name) return true;
  return false;
}

double norm_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double norm_logcdf(double x) {
  if (x > -8.0) {
    // erfc is accurate here and the log does not underflow
    return std::log(norm_cdf(x));
  }
  // Asymptotic expansion of Mills ratio for the deep lower tail
  double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(-x) + std::log(series);
}

// Inverse standard normal CDF (Wichura AS241-style rational approximation),
// refined with one Halley step; relative error below 1e-14 on (0,1).
double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DataError("norm_quantile: p outside [0,1]");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement
  double e = norm_cdf(x) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace orthoreg
