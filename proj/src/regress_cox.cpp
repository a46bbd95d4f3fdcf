#include <algorithm>
#include <cmath>
#include <numeric>

#include "orthoreg/regress.hpp"

namespace orthoreg {

namespace {

constexpr int kMaxIter = 100;
constexpr int kMaxHalvings = 20;
constexpr double kLoglikRelTol = 1e-10;
constexpr double kGradientTol = 1e-8;
constexpr double kDivergenceNorm = 1e4;
constexpr double kSuspectNorm = 15.0;

// Preprocessed view of the rows: sort orders for the descending risk-set sweep
// and event rows grouped by distinct event time.
struct CoxContext {
  const std::vector<CountingProcessRow>* rows;
  Vector weights;                     // per row
  Index p = 0;
  std::vector<Index> by_stop;         // row indices, tstop descending
  std::vector<Index> by_start;        // row indices, tstart descending
  std::vector<double> event_times;    // distinct, descending
  std::vector<std::vector<Index>> events_at;  // event rows per distinct time
};

CoxContext make_context(const std::vector<CountingProcessRow>& rows,
                        const std::optional<Weights>& w) {
  if (rows.empty()) throw DataError("fit_cox: no rows");
  CoxContext ctx;
  ctx.rows = &rows;
  const Index n = static_cast<Index>(rows.size());
  ctx.p = rows[0].covariates.size();
  ctx.weights = w ? w->values : Vector::Ones(n);
  if (ctx.weights.size() != n) throw DataError("fit_cox: weight length mismatch");
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[i];
    if (!(r.tstart < r.tstop))
      throw DataError("fit_cox: row " + std::to_string(i) + " has tstart >= tstop");
    if (r.covariates.size() != ctx.p)
      throw DataError("fit_cox: inconsistent covariate dimension at row " + std::to_string(i));
    if (!r.covariates.allFinite())
      throw DataError("fit_cox: non-finite covariate at row " + std::to_string(i));
  }

  ctx.by_stop.resize(n);
  ctx.by_start.resize(n);
  std::iota(ctx.by_stop.begin(), ctx.by_stop.end(), Index{0});
  std::iota(ctx.by_start.begin(), ctx.by_start.end(), Index{0});
  std::stable_sort(ctx.by_stop.begin(), ctx.by_stop.end(),
                   [&](Index a, Index b) { return rows[a].tstop > rows[b].tstop; });
  std::stable_sort(ctx.by_start.begin(), ctx.by_start.end(),
                   [&](Index a, Index b) { return rows[a].tstart > rows[b].tstart; });

  std::vector<Index> event_rows;
  for (Index i = 0; i < n; ++i)
    if (rows[i].event == 1 && ctx.weights[i] > 0.0) event_rows.push_back(i);
  if (event_rows.empty()) throw DataError("fit_cox: no events");
  std::stable_sort(event_rows.begin(), event_rows.end(),
                   [&](Index a, Index b) { return rows[a].tstop > rows[b].tstop; });
  for (Index i : event_rows) {
    double t = rows[i].tstop;
    if (ctx.event_times.empty() || ctx.event_times.back() != t) {
      ctx.event_times.push_back(t);
      ctx.events_at.emplace_back();
    }
    ctx.events_at.back().push_back(i);
  }
  return ctx;
}

// One sweep over descending event times. Accumulates the Breslow partial
// log-likelihood, and optionally its gradient, negative Hessian, and the
// baseline hazard increments.
struct CoxEval {
  double ll = 0.0;
  Vector score;
  Matrix info;
  std::vector<double> hazard_increments;  // aligned with ctx.event_times (descending)
};

CoxEval cox_sweep(const CoxContext& ctx, const Vector& beta, bool derivatives,
                  bool baseline = false) {
  const auto& rows = *ctx.rows;
  const Index n = static_cast<Index>(rows.size());
  const Index p = ctx.p;

  Vector eta(n);
  for (Index i = 0; i < n; ++i) eta[i] = rows[i].covariates.dot(beta);

  CoxEval out;
  if (derivatives) {
    out.score = Vector::Zero(p);
    out.info = Matrix::Zero(p, p);
  }
  if (baseline) out.hazard_increments.assign(ctx.event_times.size(), 0.0);

  double s0 = 0.0;
  Vector s1 = Vector::Zero(p);
  Matrix s2 = Matrix::Zero(p, p);
  std::size_t add_ptr = 0, remove_ptr = 0;

  auto apply = [&](Index i, double sign) {
    double rw = ctx.weights[i] * std::exp(eta[i]) * sign;
    if (rw == 0.0) return;
    s0 += rw;
    if (derivatives) {
      s1.noalias() += rw * rows[i].covariates;
      s2.noalias() += rw * rows[i].covariates * rows[i].covariates.transpose();
    }
  };

  for (std::size_t k = 0; k < ctx.event_times.size(); ++k) {
    const double tau = ctx.event_times[k];
    while (add_ptr < ctx.by_stop.size() && rows[ctx.by_stop[add_ptr]].tstop >= tau)
      apply(ctx.by_stop[add_ptr++], +1.0);
    while (remove_ptr < ctx.by_start.size() && rows[ctx.by_start[remove_ptr]].tstart >= tau)
      apply(ctx.by_start[remove_ptr++], -1.0);

    double d = 0.0;
    for (Index i : ctx.events_at[k]) {
      d += ctx.weights[i];
      out.ll += ctx.weights[i] * eta[i];
      if (derivatives) out.score.noalias() += ctx.weights[i] * rows[i].covariates;
    }
    if (!(s0 > 0.0) || !std::isfinite(s0)) {
      out.ll = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.ll -= d * std::log(s0);
    if (derivatives) {
      Vector mean = s1 / s0;
      out.score.noalias() -= d * mean;
      out.info.noalias() += d * (s2 / s0 - mean * mean.transpose());
    }
    if (baseline) out.hazard_increments[k] = d / s0;
  }
  return out;
}

void check_identifiable(const Matrix& info, double scale_hint) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(info);
  double maxev = es.eigenvalues().maxCoeff();
  double minev = es.eigenvalues().minCoeff();
  if (!(maxev > 1e-12 * std::max(1.0, scale_hint)) || minev <= 1e-10 * maxev)
    throw NonIdentifiableError(
        "fit_cox: flat partial likelihood (covariates carry no risk-set contrast)");
}

}  // namespace

double cox_loglik(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                  const std::optional<Weights>& w) {
  return cox_sweep(make_context(rows, w), beta, false).ll;
}

Vector cox_score(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                 const std::optional<Weights>& w) {
  return cox_sweep(make_context(rows, w), beta, true).score;
}

Matrix cox_information(const std::vector<CountingProcessRow>& rows, const Vector& beta,
                       const std::optional<Weights>& w) {
  return cox_sweep(make_context(rows, w), beta, true).info;
}

FitResult fit_cox(const std::vector<CountingProcessRow>& rows,
                  const std::vector<std::string>& column_names,
                  const std::optional<Weights>& w) {
  CoxContext ctx = make_context(rows, w);
  const Index p = ctx.p;
  if (static_cast<Index>(column_names.size()) != p)
    throw DataError("fit_cox: column name count does not match covariate dimension");

  Vector beta = Vector::Zero(p);
  CoxEval eval = cox_sweep(ctx, beta, true);
  check_identifiable(eval.info, eval.info.diagonal().maxCoeff());
  double ll = eval.ll;
  bool improved_every_step = true;
  bool converged = false;
  int iter = 0;

  for (iter = 1; iter <= kMaxIter; ++iter) {
    if (eval.score.lpNorm<Eigen::Infinity>() < kGradientTol) {
      converged = true;
      break;
    }
    Matrix H = eval.info;
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      H.diagonal().array() += 1e-8 * (1.0 + H.diagonal().maxCoeff());
      ldlt.compute(H);
    }
    Vector step = ldlt.solve(eval.score);
    if (!step.allFinite())
      throw MonotoneLikelihoodError("fit_cox: Newton step not finite (monotone likelihood)");

    double scale = 1.0;
    bool accepted = false;
    Vector candidate;
    double new_ll = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      candidate = beta + scale * step;
      new_ll = cox_sweep(ctx, candidate, false).ll;
      if (std::isfinite(new_ll) && new_ll >= ll) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      improved_every_step = false;
      converged = eval.score.lpNorm<Eigen::Infinity>() < kGradientTol;
      break;
    }

    double rel_change = std::abs(new_ll - ll) / (std::abs(ll) + 1e-300);
    bool still_improving = new_ll > ll;
    beta = candidate;
    ll = new_ll;
    eval = cox_sweep(ctx, beta, true);

    if (beta.lpNorm<Eigen::Infinity>() > kDivergenceNorm && still_improving)
      throw MonotoneLikelihoodError("fit_cox: coefficient diverging with improving likelihood");

    if (rel_change < kLoglikRelTol) {
      converged = eval.score.lpNorm<Eigen::Infinity>() < kGradientTol;
      break;
    }
  }

  if (beta.lpNorm<Eigen::Infinity>() > kSuspectNorm && improved_every_step)
    throw MonotoneLikelihoodError("fit_cox: coefficient escaped to " +
                                  std::to_string(beta.lpNorm<Eigen::Infinity>()) +
                                  " with monotone likelihood");
  check_identifiable(eval.info, eval.info.diagonal().maxCoeff());

  FitResult fit;
  fit.family = Family::cox;
  fit.coefficients = beta;
  fit.column_names = column_names;
  Eigen::LDLT<Matrix> ldlt(eval.info);
  fit.covariance = ldlt.solve(Matrix::Identity(p, p));
  fit.loglik = ll;
  fit.converged = converged;
  fit.iterations = iter;
  if (!converged)
    fit.warnings.push_back("Newton did not converge in " + std::to_string(kMaxIter) +
                           " iterations");
  return fit;
}

StepFunction breslow_cumhaz(const FitResult& fit, const std::vector<CountingProcessRow>& rows,
                            const std::optional<Weights>& w) {
  if (fit.family != Family::cox) throw DataError("breslow_cumhaz: fit is not a cox fit");
  bool any_event = false;
  for (const auto& r : rows)
    if (r.event == 1) any_event = true;
  if (!any_event) return StepFunction({}, {});
  CoxContext ctx = make_context(rows, w);
  CoxEval eval = cox_sweep(ctx, fit.coefficients, false, true);
  // Sweep is descending; flip to ascending jump order.
  std::vector<double> times(ctx.event_times.rbegin(), ctx.event_times.rend());
  std::vector<double> incs(eval.hazard_increments.rbegin(), eval.hazard_increments.rend());
  return StepFunction(std::move(times), std::move(incs));
}

Vector predict(const FitResult& fit, const DesignMatrix& X) {
  if (X.column_names != fit.column_names)
    throw DataError("predict: design columns do not match the fit");
  Vector eta = X.values * fit.coefficients;
  switch (fit.family) {
    case Family::ols:
    case Family::cox:
      return eta;
    case Family::poisson_log:
      return eta.array().exp();
    case Family::logistic:
      return (1.0 / (1.0 + (-eta.array()).exp()));
    case Family::probit: {
      Vector mu(eta.size());
      for (Index i = 0; i < eta.size(); ++i) mu[i] = norm_cdf(eta[i]);
      return mu;
    }
  }
  throw DataError("predict: unknown family");
}

}  // namespace orthoreg
