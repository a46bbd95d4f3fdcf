#include <cmath>

#include "orthoreg/regress.hpp"

namespace orthoreg {

namespace {

constexpr int kMaxIter = 100;
constexpr int kMaxHalvings = 20;
constexpr double kLoglikRelTol = 1e-10;
constexpr double kGradientTol = 1e-8;
constexpr double kDivergenceNorm = 1e4;   // in-flight escape threshold
constexpr double kSuspectNorm = 15.0;     // post-hoc separation screen

// Inverse Mills ratio phi(x)/Phi(x), stable for x << 0.
double inv_mills(double x) {
  if (x < -8.0) {
    double x2 = x * x;
    // phi/Phi ~ -x / (1 - 1/x^2 + 3/x^4 - ...)
    return -x / (1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2));
  }
  return norm_pdf(x) / norm_cdf(x);
}

void check_response(const Vector& y, Family family) {
  if (!y.allFinite()) throw DataError("fit_glm: response contains non-finite values");
  switch (family) {
    case Family::poisson_log:
      if ((y.array() < 0.0).any()) throw DataError("poisson_log response must be nonnegative");
      break;
    case Family::probit:
    case Family::logistic:
      for (Index i = 0; i < y.size(); ++i)
        if (y[i] != 0.0 && y[i] != 1.0)
          throw DataError("binary response must be 0/1 (row " + std::to_string(i) + ")");
      break;
    default:
      throw DataError("fit_glm: unsupported family " + family_name(family));
  }
}

// Per-observation contributions. eta -> (loglik, dll/deta, -d2ll/deta2).
struct EtaDerivs {
  double ll, score, info;
};

EtaDerivs eta_derivs(Family family, double eta, double y) {
  EtaDerivs d{};
  switch (family) {
    case Family::poisson_log: {
      double mu = std::exp(eta);
      d.ll = y * eta - mu - std::lgamma(y + 1.0);
      d.score = y - mu;
      d.info = mu;
      break;
    }
    case Family::logistic: {
      // log(1+e^eta) computed stably
      double softplus = eta > 30.0 ? eta : std::log1p(std::exp(eta));
      double mu = 1.0 / (1.0 + std::exp(-eta));
      d.ll = y * eta - softplus;
      d.score = y - mu;
      d.info = mu * (1.0 - mu);
      break;
    }
    case Family::probit: {
      if (y == 1.0) {
        double m = inv_mills(eta);
        d.ll = norm_logcdf(eta);
        d.score = m;
        d.info = m * (eta + m);
      } else {
        double m = inv_mills(-eta);  // phi(eta)/(1-Phi(eta))
        d.ll = norm_logcdf(-eta);
        d.score = -m;
        d.info = m * (m - eta);
      }
      break;
    }
    default:
      throw DataError("eta_derivs: bad family");
  }
  return d;
}

double weight_at(const std::optional<Weights>& w, Index i) {
  return w ? w->values[i] : 1.0;
}

}  // namespace

double glm_loglik(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                  const std::optional<Weights>& w) {
  Vector eta = X.values * beta;
  double ll = 0.0;
  for (Index i = 0; i < y.size(); ++i) ll += weight_at(w, i) * eta_derivs(family, eta[i], y[i]).ll;
  return ll;
}

Vector glm_score(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                 const std::optional<Weights>& w) {
  Vector eta = X.values * beta;
  Vector s = Vector::Zero(y.size());
  for (Index i = 0; i < y.size(); ++i)
    s[i] = weight_at(w, i) * eta_derivs(family, eta[i], y[i]).score;
  return X.values.transpose() * s;
}

Matrix glm_information(const DesignMatrix& X, const Vector& y, Family family, const Vector& beta,
                       const std::optional<Weights>& w) {
  Vector eta = X.values * beta;
  Vector c(y.size());
  for (Index i = 0; i < y.size(); ++i)
    c[i] = weight_at(w, i) * eta_derivs(family, eta[i], y[i]).info;
  return X.values.transpose() * c.asDiagonal() * X.values;
}

FitResult fit_glm(const DesignMatrix& X, const Vector& y, Family family,
                  const std::optional<Weights>& w) {
  X.validate();
  const Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw DataError("fit_glm: response length does not match design rows");
  if (n < p) throw DataError("fit_glm: fewer rows than columns");
  if (w && w->values.size() != n) throw DataError("fit_glm: weight length mismatch");
  check_response(y, family);

  Vector beta = Vector::Zero(p);
  double ll = glm_loglik(X, y, family, beta, w);
  bool improved_every_step = true;
  int iter = 0;
  bool converged = false;
  std::vector<std::string> warnings;

  for (iter = 1; iter <= kMaxIter; ++iter) {
    Vector g = glm_score(X, y, family, beta, w);
    if (g.lpNorm<Eigen::Infinity>() < kGradientTol) {
      converged = true;
      break;
    }
    Matrix H = glm_information(X, y, family, beta, w);
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      // Ridge fallback keeps the step direction usable on flat stretches.
      H.diagonal().array() += 1e-8 * (1.0 + H.diagonal().maxCoeff());
      ldlt.compute(H);
      if (ldlt.info() != Eigen::Success)
        throw SingularDesignError("fit_glm: information matrix is singular", X.column_names);
    }
    Vector step = ldlt.solve(g);

    double scale = 1.0;
    double new_ll = -std::numeric_limits<double>::infinity();
    Vector candidate;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      candidate = beta + scale * step;
      new_ll = glm_loglik(X, y, family, candidate, w);
      if (std::isfinite(new_ll) && new_ll >= ll) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      improved_every_step = false;
      // Could not improve in 20 halvings; treat current point as converged-ish.
      converged = glm_score(X, y, family, beta, w).lpNorm<Eigen::Infinity>() < kGradientTol;
      break;
    }

    double rel_change = std::abs(new_ll - ll) / (std::abs(ll) + 1e-300);
    beta = candidate;
    bool still_improving = new_ll > ll;
    ll = new_ll;

    if (beta.lpNorm<Eigen::Infinity>() > kDivergenceNorm && still_improving)
      throw SeparationError("fit_glm: coefficients diverging with improving likelihood (" +
                            family_name(family) + ")");

    if (rel_change < kLoglikRelTol) {
      converged = glm_score(X, y, family, beta, w).lpNorm<Eigen::Infinity>() < kGradientTol;
      break;
    }
  }

  // Post-hoc separation screens: a binary-family "optimum" that perfectly
  // classifies the data, or any optimum with absurd coefficient scale reached
  // by monotone improvement, is a separated fit rather than an MLE.
  if (family == Family::probit || family == Family::logistic) {
    Vector eta = X.values * beta;
    bool perfect = true;
    for (Index i = 0; i < n; ++i) {
      if (weight_at(w, i) == 0.0) continue;
      double mu = family == Family::probit ? norm_cdf(eta[i]) : 1.0 / (1.0 + std::exp(-eta[i]));
      if ((y[i] == 1.0 && mu < 1.0 - 1e-6) || (y[i] == 0.0 && mu > 1e-6)) {
        perfect = false;
        break;
      }
    }
    if (perfect)
      throw SeparationError("fit_glm: complete separation (" + family_name(family) + ")");
  }
  if (beta.lpNorm<Eigen::Infinity>() > kSuspectNorm && improved_every_step)
    throw SeparationError("fit_glm: coefficient escaped to " +
                          std::to_string(beta.lpNorm<Eigen::Infinity>()) +
                          " with monotone likelihood (" + family_name(family) + ")");

  FitResult fit;
  fit.family = family;
  fit.coefficients = beta;
  fit.column_names = X.column_names;
  Matrix H = glm_information(X, y, family, beta, w);
  Eigen::LDLT<Matrix> ldlt(H);
  fit.covariance = ldlt.solve(Matrix::Identity(p, p));
  fit.loglik = ll;
  fit.converged = converged;
  fit.iterations = iter;
  if (!converged) fit.warnings.push_back("IRLS did not converge in " + std::to_string(kMaxIter) +
                                         " iterations");
  fit.warnings.insert(fit.warnings.end(), warnings.begin(), warnings.end());
  return fit;
}

}  // namespace orthoreg
