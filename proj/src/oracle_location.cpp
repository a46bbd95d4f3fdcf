#include <cmath>

#include "orthoreg/oracle.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Shared covariate recursion: X_t = a_to_x * A_{t-1} + carry * X_{t-1} + eps_t.
// Returns the residual draws alongside the covariate path.
struct LocationPath {
  Vector x, eps, a;
};

template <typename Scm>
LocationPath simulate_location_path(const Scm& scm, std::mt19937_64& rng,
                                    const Vector* forced_abar) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  LocationPath path;
  path.x.resize(scm.T);
  path.eps.resize(scm.T);
  path.a.resize(scm.T);
  double prev_x = 0.0, prev_a = 0.0;
  for (Index t = 0; t < scm.T; ++t) {
    path.eps[t] = scm.sigmas[t] * gauss(rng);
    path.x[t] = scm.a_to_x * prev_a + scm.carry * prev_x + path.eps[t];
    path.a[t] = forced_abar ? (*forced_abar)[t]
                            : (unif(rng) < sigmoid(scm.x_to_a * path.x[t]) ? 1.0 : 0.0);
    prev_x = path.x[t];
    prev_a = path.a[t];
  }
  return path;
}

}  // namespace

double ProbitLocationScm::sigma2_total() const {
  return (lambda.array().square() * sigmas.array().square()).sum();
}

double ProbitLocationScm::marginal_probability(const Vector& abar) const {
  double shrink = 1.0 / std::sqrt(1.0 + sigma2_total());
  return norm_cdf((alpha + beta.dot(abar)) * shrink);
}

PanelDataset ProbitLocationScm::simulate_panel(Index n, std::uint64_t seed) const {
  std::vector<SubjectRecord> subjects;
  subjects.reserve(n);
  for (Index i = 0; i < n; ++i) {
    auto rng = substream(seed, "dgp", static_cast<std::uint64_t>(i));
    LocationPath path = simulate_location_path(*this, rng, nullptr);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double eta = alpha + beta.dot(path.a) + lambda.dot(path.eps);
    double y = unif(rng) < norm_cdf(eta) ? 1.0 : 0.0;
    SubjectRecord s;
    s.id = "s" + std::to_string(i + 1);
    s.covariates.resize(T);
    s.treatments.resize(T);
    for (Index t = 0; t < T; ++t) {
      s.covariates[t] = Vector::Constant(1, path.x[t]);
      s.treatments[t] = path.a[t];
    }
    s.outcome = Outcome::binary(y);
    subjects.push_back(std::move(s));
  }
  return PanelDataset::build(std::move(subjects));
}

double ProbitLocationScm::draw_intervened(const Vector& abar, std::mt19937_64& rng) const {
  LocationPath path = simulate_location_path(*this, rng, &abar);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double eta = alpha + beta.dot(abar) + lambda.dot(path.eps);
  return unif(rng) < norm_cdf(eta) ? 1.0 : 0.0;
}

double CoxLocationScm::sigma2_total() const {
  return (lambda.array().square() * sigmas.array().square()).sum();
}

PanelDataset CoxLocationScm::simulate_panel(Index n, std::uint64_t seed,
                                            double censor_time) const {
  std::vector<SubjectRecord> subjects;
  subjects.reserve(n);
  for (Index i = 0; i < n; ++i) {
    auto rng = substream(seed, "dgp", static_cast<std::uint64_t>(i));
    LocationPath path = simulate_location_path(*this, rng, nullptr);
    std::exponential_distribution<double> exp1(1.0);
    double mult = std::exp(beta.dot(path.a) + lambda.dot(path.eps));
    double y = exp1(rng) / (base_hazard * mult);
    int event = y <= censor_time ? 1 : 0;
    if (!event) y = censor_time;
    SubjectRecord s;
    s.id = "s" + std::to_string(i + 1);
    s.covariates.resize(T);
    s.treatments.resize(T);
    for (Index t = 0; t < T; ++t) {
      s.covariates[t] = Vector::Constant(1, path.x[t]);
      s.treatments[t] = path.a[t];
    }
    s.outcome = Outcome::survival(y, event);
    subjects.push_back(std::move(s));
  }
  return PanelDataset::build(std::move(subjects));
}

double CoxLocationScm::draw_intervened_time(const Vector& abar, std::mt19937_64& rng) const {
  LocationPath path = simulate_location_path(*this, rng, &abar);
  std::exponential_distribution<double> exp1(1.0);
  double mult = std::exp(beta.dot(abar) + lambda.dot(path.eps));
  return exp1(rng) / (base_hazard * mult);
}

}  // namespace orthoreg
