#include <cmath>

#include "orthoreg/oracle.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

GaussianScm::GaussianScm(double rho_ax, double rho_xa, double rho_ux,
                         std::optional<std::pair<double, double>> treatment_effects)
    : rho_ax_(rho_ax), rho_xa_(rho_xa), rho_ux_(rho_ux), effects_(treatment_effects) {
  double vx = 1.0 - rho_ax_ * rho_ax_ - rho_ux_ * rho_ux_;
  double va = 1.0 - rho_xa_ * rho_xa_;
  if (vx < 0.0 || va < 0.0)
    throw DataError("GaussianScm: correlations do not yield a valid covariance matrix");
  x_noise_sd_ = std::sqrt(vx);
  a2_noise_sd_ = std::sqrt(va);
}

Matrix GaussianScm::covariance() const {
  // Loadings of (A1, X2, A2, Y) on the independent sources (A1, U, ex, ea).
  auto [b1, b2] = effects();
  Matrix L = Matrix::Zero(4, 4);
  L(0, 0) = 1.0;                                            // A1
  L(1, 0) = rho_ax_;                                        // X2
  L(1, 1) = rho_ux_;
  L(1, 2) = x_noise_sd_;
  L.row(2) = rho_xa_ * L.row(1);                            // A2
  L(2, 3) = a2_noise_sd_;
  L.row(3) = b1 * L.row(0) + b2 * L.row(2);                 // Y
  L(3, 1) += 1.0;                                           // unit loading of U on Y
  return L * L.transpose();
}

PanelDataset GaussianScm::simulate_panel(Index n, std::uint64_t seed) const {
  auto [b1, b2] = effects();
  std::vector<SubjectRecord> subjects;
  subjects.reserve(n);
  for (Index i = 0; i < n; ++i) {
    auto rng = substream(seed, "dgp", static_cast<std::uint64_t>(i));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double a1 = gauss(rng);
    double u = gauss(rng);
    double x2 = rho_ax_ * a1 + rho_ux_ * u + x_noise_sd_ * gauss(rng);
    double a2 = rho_xa_ * x2 + a2_noise_sd_ * gauss(rng);
    double y = b1 * a1 + b2 * a2 + u;
    SubjectRecord s;
    s.id = "s" + std::to_string(i + 1);
    s.covariates = {Vector(0), Vector::Constant(1, x2)};
    s.treatments = {a1, a2};
    s.outcome = Outcome::continuous(y);
    subjects.push_back(std::move(s));
  }
  return PanelDataset::build(std::move(subjects));
}

double GaussianScm::draw_intervened(const Vector& abar, std::mt19937_64& rng) const {
  if (abar.size() != 2) throw DataError("GaussianScm: abar must have two entries");
  auto [b1, b2] = effects();
  std::normal_distribution<double> gauss(0.0, 1.0);
  double u = gauss(rng);
  (void)(rho_ax_ * abar[0] + rho_ux_ * u + x_noise_sd_ * gauss(rng));  // X2 under do(a1)
  return b1 * abar[0] + b2 * abar[1] + u;
}

Eigen::Vector3d gaussian_naive_coeffs(const GaussianScm& scm) {
  if (!scm.is_null())
    throw DataError("gaussian_naive_coeffs: closed form applies to the null structure");
  double r = scm.rho_ax();
  double denom = 1.0 - r * r;
  if (denom <= 0.0) throw DataError("gaussian_naive_coeffs: rho_ax^2 = 1 is singular");
  return {-r * scm.rho_ux() / denom, scm.rho_ux() / denom, 0.0};
}

Eigen::Vector2d gaussian_causal_theta(const GaussianScm& scm) {
  Matrix S = scm.covariance();
  Matrix Szz = S.topLeftCorner(3, 3);
  Vector Szy = S.topRightCorner(3, 1);
  Eigen::LDLT<Matrix> ldlt(Szz);
  if (ldlt.info() != Eigen::Success)
    throw DataError("gaussian_causal_theta: singular covariate covariance");
  Vector naive = ldlt.solve(Szy);
  // Cov(A1, X2)/Var(A1) = rho_ax under the standardized structure.
  return {naive[0] + scm.rho_ax() * naive[1], naive[2]};
}

}  // namespace orthoreg
