#include "orthoreg/positivity.hpp"

#include <cstdio>

#include "orthoreg/design.hpp"
#include "orthoreg/regress.hpp"

namespace orthoreg {

PositivityReport check_positivity(const PanelDataset& panel, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw DataError("check_positivity: epsilon must lie in (0,1)");
  for (Index i = 0; i < panel.n(); ++i)
    for (Index t = 1; t <= panel.T(); ++t) {
      double a = panel.treatment(i, t);
      if (a != 0.0 && a != 1.0)
        throw DataError("check_positivity: treatments must be binary 0/1");
    }

  PositivityReport report;
  report.epsilon = epsilon;
  Index n_pooled = 0;
  double pooled_outside = 0.0;

  for (Index t = 1; t <= panel.T(); ++t) {
    PositivityTimeReport tr;
    tr.t = t;
    DesignMatrix X = DesignMatrix::with_intercept(panel.n());
    for (Index s = 1; s <= t; ++s)
      for (Index j = 0; j < panel.covariate_dims()[s - 1]; ++j)
        X.add_column("x" + std::to_string(s) + "_" + std::to_string(j + 1),
                     panel.covariates(s).col(j));
    for (Index s = 1; s < t; ++s)
      X.add_column("a" + std::to_string(s), panel.treatments().col(s - 1));
    Vector a = panel.treatments().col(t - 1);
    try {
      FitResult fit = fit_glm(X, a, Family::logistic);
      Vector p = predict(fit, X);
      tr.fit_ok = true;
      tr.min_propensity = p.minCoeff();
      tr.max_propensity = p.maxCoeff();
      Index outside = 0;
      for (Index i = 0; i < p.size(); ++i)
        if (p[i] < epsilon || p[i] > 1.0 - epsilon) ++outside;
      tr.frac_outside = static_cast<double>(outside) / static_cast<double>(p.size());
      pooled_outside += static_cast<double>(outside);
      n_pooled += p.size();
    } catch (const std::exception& e) {
      tr.fit_ok = false;
      tr.error = e.what();
      report.any_failure = true;
    }
    report.per_time.push_back(std::move(tr));
  }
  report.overall_frac_outside = n_pooled > 0 ? pooled_outside / static_cast<double>(n_pooled)
                                             : 0.0;
  return report;
}

std::string PositivityReport::to_string() const {
  std::string out = "positivity check (epsilon=" + std::to_string(epsilon) + ")\n";
  char buf[160];
  for (const auto& tr : per_time) {
    if (tr.fit_ok) {
      std::snprintf(buf, sizeof(buf),
                    "  t=%ld: propensity range [%.4f, %.4f], frac outside bounds %.4f\n",
                    static_cast<long>(tr.t), tr.min_propensity, tr.max_propensity,
                    tr.frac_outside);
      out += buf;
    } else {
      out += "  t=" + std::to_string(tr.t) + ": fit failed (" + tr.error + ")\n";
    }
  }
  std::snprintf(buf, sizeof(buf), "  overall frac outside: %.4f\n", overall_frac_outside);
  out += buf;
  return out;
}

}  // namespace orthoreg
