#include <cmath>

#include "orthoreg/regress.hpp"

namespace orthoreg {

namespace {

constexpr double kRcondGuard = 1e-12;

// Column-pivoted QR solve with a reciprocal-condition guard on the R diagonal.
// On rank deficiency, throws naming the pivoted-out columns.
struct GuardedQr {
  Eigen::ColPivHouseholderQR<Matrix> qr;
  explicit GuardedQr(const Matrix& A, const std::vector<std::string>& names) : qr(A) {
    const Index p = A.cols();
    const Matrix& R = qr.matrixR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < p; ++k) {
      double d = std::abs(R(k, k));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (!(dmin > kRcondGuard * dmax)) {
      // Columns pivoted past the numerical rank are the dependent ones.
      Index rank = 0;
      while (rank < p && std::abs(R(rank, rank)) > kRcondGuard * dmax) ++rank;
      std::vector<std::string> dependent;
      const auto& perm = qr.colsPermutation().indices();
      for (Index k = rank; k < p; ++k) dependent.push_back(names[perm[k]]);
      std::string msg = "singular design: dependent column(s)";
      for (const auto& c : dependent) msg += " " + c;
      throw SingularDesignError(msg, dependent);
    }
  }
  Vector solve(const Vector& rhs) const { return qr.solve(rhs); }
  // (A'A)^-1 from the R factor.
  Matrix normal_inverse() const {
    const Index p = qr.matrixR().cols();
    Matrix R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    Matrix Rinv = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
    Matrix inner = Rinv * Rinv.transpose();
    const auto& P = qr.colsPermutation();
    return P * inner * P.transpose();
  }
};

}  // namespace

FitResult fit_ols(const DesignMatrix& X, const Vector& y, const std::optional<Weights>& w) {
  X.validate();
  const Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw DataError("fit_ols: response length does not match design rows");
  if (!y.allFinite()) throw DataError("fit_ols: response contains non-finite values");
  if (n < p) throw DataError("fit_ols: fewer rows than columns");
  if (w && w->values.size() != n) throw DataError("fit_ols: weight length mismatch");

  Matrix A;
  Vector b;
  if (w) {
    Vector sw = w->values.array().sqrt();
    A = sw.asDiagonal() * X.values;
    b = sw.asDiagonal() * y;
  } else {
    A = X.values;
    b = y;
  }

  GuardedQr qr(A, X.column_names);
  Vector beta = qr.solve(b);
  Vector resid = y - X.values * beta;

  double rss = w ? (w->values.array() * resid.array().square()).sum()
                 : resid.squaredNorm();
  rss = std::max(rss, 0.0);
  double dof = static_cast<double>(n - p);
  double sigma2 = dof > 0 ? rss / dof : 0.0;

  FitResult fit;
  fit.family = Family::ols;
  fit.coefficients = beta;
  fit.column_names = X.column_names;
  fit.covariance = sigma2 * qr.normal_inverse();
  fit.sigma2 = sigma2;
  double n_eff = w ? w->values.sum() : static_cast<double>(n);
  double mle_var = std::max(rss / n_eff, 1e-300);
  fit.loglik = -0.5 * n_eff * (std::log(2.0 * M_PI * mle_var) + 1.0);
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

}  // namespace orthoreg
