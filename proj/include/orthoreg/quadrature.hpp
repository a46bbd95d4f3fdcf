#pragma once

#include "orthoreg/types.hpp"

namespace orthoreg {

/// Gauss-Hermite rule for integrals against exp(-x^2) dx.
struct GaussHermite {
  Vector nodes;
  Vector weights;
};

/// Nodes and weights via the Golub-Welsch eigendecomposition of the Jacobi matrix.
GaussHermite gauss_hermite(Index n);

/// E[f(Z)] for Z ~ N(mean, sd^2) using a precomputed rule.
template <typename F>
double gauss_hermite_expectation(const GaussHermite& rule, double mean, double sd, F&& f) {
  constexpr double inv_sqrt_pi = 0.5641895835477562869;
  const double scale = 1.4142135623730950488 * sd;  // sqrt(2) * sd
  double acc = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mean + scale * rule.nodes[i]);
  return acc * inv_sqrt_pi;
}

}  // namespace orthoreg
