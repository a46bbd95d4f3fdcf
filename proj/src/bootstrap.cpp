#include "orthoreg/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "orthoreg/parallel.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

double sample_quantile(Vector values, double p) {
  if (values.size() == 0) throw DataError("sample_quantile: empty sample");
  p = std::min(std::max(p, 0.0), 1.0);
  std::sort(values.data(), values.data() + values.size());
  double h = (static_cast<double>(values.size()) - 1.0) * p;
  Index lo = static_cast<Index>(std::floor(h));
  Index hi = std::min(lo + 1, values.size() - 1);
  double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BootstrapResult bootstrap(const EstimatorConfig& estimator, const PanelDataset& panel, Index B,
                          double level, std::uint64_t seed, int threads) {
  if (B < 2) throw DataError("bootstrap: B must be at least 2");
  if (!(level > 0.0 && level < 1.0)) throw DataError("bootstrap: level must lie in (0,1)");

  BootstrapResult out;
  out.level = level;
  if (B < 100)
    out.warnings.push_back("B < 100 is too small for interval use; results kept anyway");

  CausalEstimate point = run_estimator(panel, estimator);
  out.point = point.theta;
  out.names = point.names;
  const Index p = out.point.size();
  const Index n = panel.n();

  Matrix reps(B, p);
  std::vector<char> ok(B, 0);
  parallel_for(B, threads, [&](long b) {
    auto rng = substream(seed, "bootstrap-replicate", static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> idx(n);
    for (Index i = 0; i < n; ++i) idx[i] = pick(rng);
    try {
      PanelDataset resampled = panel.resample(idx);
      CausalEstimate est = run_estimator(resampled, estimator);
      if (est.theta.size() != p) throw DataError("replicate returned a different shape");
      reps.row(b) = est.theta.transpose();
      ok[b] = 1;
    } catch (const std::exception&) {
      ok[b] = 0;
    }
  });

  Index good = 0;
  for (char c : ok) good += c;
  out.n_failed = B - good;
  if (good < B - B / 10)
    throw BootstrapError("bootstrap: " + std::to_string(out.n_failed) + " of " +
                         std::to_string(B) + " replicates failed");
  out.replicates.resize(good, p);
  Index r = 0;
  for (Index b = 0; b < B; ++b)
    if (ok[b]) out.replicates.row(r++) = reps.row(b);

  out.se.resize(p);
  out.ci_lower.resize(p);
  out.ci_upper.resize(p);
  out.z.resize(p);
  const double alpha = 1.0 - level;
  for (Index j = 0; j < p; ++j) {
    Vector col = out.replicates.col(j);
    double mean = col.mean();
    double var = good > 1 ? (col.array() - mean).square().sum() / static_cast<double>(good - 1)
                          : 0.0;
    out.se[j] = std::sqrt(var);
    double q_lo = sample_quantile(col, alpha / 2.0);
    double q_hi = sample_quantile(col, 1.0 - alpha / 2.0);
    out.ci_lower[j] = 2.0 * out.point[j] - q_hi;
    out.ci_upper[j] = 2.0 * out.point[j] - q_lo;
    out.z[j] = out.se[j] > 0.0 ? out.point[j] / out.se[j] : 0.0;
  }
  return out;
}

}  // namespace orthoreg
