#include "orthoreg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace orthoreg {

GaussHermite gauss_hermite(Index n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  // Jacobi matrix of the (physicists') Hermite recurrence: zero diagonal,
  // off-diagonal sqrt(k/2).
  Matrix J = Matrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) {
    double off = std::sqrt(0.5 * static_cast<double>(k));
    J(k, k - 1) = off;
    J(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  GaussHermite rule;
  rule.nodes = es.eigenvalues();
  rule.weights = Vector(n);
  const double sqrt_pi = std::sqrt(M_PI);
  for (Index i = 0; i < n; ++i) {
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  return rule;
}

}  // namespace orthoreg
