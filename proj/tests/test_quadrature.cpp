#include <doctest.h>

#include <cmath>

#include "orthoreg/ortho.hpp"
#include "orthoreg/quadrature.hpp"
#include "test_support.hpp"

using namespace orthoreg;

TEST_CASE("gauss_hermite integrates normal moments exactly") {
  for (Index n : {16, 64, 256}) {
    GaussHermite rule = gauss_hermite(n);
    double m0 = gauss_hermite_expectation(rule, 0.0, 1.0, [](double) { return 1.0; });
    double m2 = gauss_hermite_expectation(rule, 0.0, 1.0, [](double z) { return z * z; });
    double m4 = gauss_hermite_expectation(rule, 0.0, 1.0, [](double z) { return z * z * z * z; });
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("gauss_hermite handles nonzero mean and sd") {
  GaussHermite rule = gauss_hermite(64);
  // E[exp(Z)] with Z ~ N(mu, sd^2) is exp(mu + sd^2/2)
  double v = gauss_hermite_expectation(rule, 0.3, 1.7, [](double z) { return std::exp(z); });
  CHECK(v == doctest::Approx(std::exp(0.3 + 0.5 * 1.7 * 1.7)).epsilon(1e-10));
}

TEST_CASE("lognormal frailty survival: degenerate and trivial cases") {
  GaussHermite rule = gauss_hermite(64);
  CHECK(lognormal_frailty_survival(1.25, 0.0, rule) == std::exp(-1.25));
  CHECK(lognormal_frailty_survival(0.0, 1.0, rule) == 1.0);
}

TEST_CASE("lognormal frailty survival matches a high-resolution trapezoid oracle") {
  GaussHermite rule = gauss_hermite(64);
  // E_Z[exp(-exp(Z))], Z ~ N(0,1), oracle over z in [-8, 8]
  auto integrand = [](double z) {
    return std::exp(-std::exp(z)) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  };
  double oracle = testsup::trapezoid(integrand, -8.0, 8.0, 200000);
  double got = lognormal_frailty_survival(1.0, 1.0, rule);
  CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
  CHECK(got == doctest::Approx(0.3817564647554833).epsilon(1e-10));

  // second configuration: cumhaz 0.5, sigma2 = 4
  auto integrand2 = [](double z) {
    return std::exp(-0.5 * std::exp(z)) * std::exp(-0.5 * z * z / 4.0) /
           (2.0 * std::sqrt(2.0 * M_PI));
  };
  double oracle2 = testsup::trapezoid(integrand2, -16.0, 16.0, 400000);
  double got2 = lognormal_frailty_survival(0.5, 4.0, rule);
  CHECK(got2 == doctest::Approx(oracle2).epsilon(1e-8));
  CHECK(got2 == doctest::Approx(0.5301160362879304).epsilon(1e-10));
}

TEST_CASE("step function evaluation") {
  StepFunction H({1.0, 2.0, 3.5}, {0.1, 0.2, 0.3});
  CHECK(H(0.5) == 0.0);
  CHECK(H(1.0) == doctest::Approx(0.1));
  CHECK(H(1.99) == doctest::Approx(0.1));
  CHECK(H(2.0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(H(10.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(H.total() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS(StepFunction({2.0, 1.0}, {0.1, 0.1}));
}
