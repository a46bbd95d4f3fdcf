#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "orthoreg/types.hpp"

namespace testsup {

using orthoreg::Index;
using orthoreg::Matrix;
using orthoreg::Vector;

// Central finite differences of a scalar function, independent of any
// analytic-derivative code path.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  Vector g(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector hi = x, lo = x;
    hi[j] += h;
    lo[j] -= h;
    g[j] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector hi = x, lo = x;
    hi[j] += h;
    lo[j] -= h;
    J.col(j) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return J;
}

// Golden-section maximizer on [lo, hi] for a unimodal function.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-7) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Cyclic coordinate ascent with golden sections; a slow but independent
// maximizer used as the likelihood oracle for low-dimensional fits.
inline Vector coordinate_max(const std::function<double(const Vector&)>& f, Vector x,
                             double radius = 4.0, int sweeps = 60) {
  for (int s = 0; s < sweeps; ++s) {
    for (Index j = 0; j < x.size(); ++j) {
      Vector probe = x;
      double best = golden_max(
          [&](double v) {
            probe[j] = v;
            return f(probe);
          },
          x[j] - radius, x[j] + radius, 1e-9);
      x[j] = best;
    }
    radius = std::max(radius * 0.5, 1e-4);
  }
  return x;
}

// Uniform-grid trapezoid rule.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi, int n) {
  double h = (hi - lo) / n;
  double acc = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < n; ++k) acc += f(lo + k * h);
  return acc * h;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace testsup
