#pragma once

#include <cstdint>

#include "orthoreg/estimator.hpp"
#include "orthoreg/panel.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

struct BootstrapResult {
  Vector point;
  std::vector<std::string> names;
  Matrix replicates;   // successful replicates, one row each
  Vector se;           // replicate standard deviation
  Vector ci_lower, ci_upper;  // basic interval: (2q - upper quantile, 2q - lower quantile)
  double level = 0.0;
  Vector z;            // point / se (0 when se is 0)
  Index n_failed = 0;
  std::vector<std::string> warnings;
};

/// Type-7 (linear interpolation) sample quantile of an unsorted copy.
double sample_quantile(Vector values, double p);

/// Nonparametric bootstrap over subjects: resamples whole trajectories with
/// replacement and reruns the full estimation pipeline, nuisance fits
/// included, on every replicate. Replicate b draws from substream
/// (seed, "bootstrap-replicate", b), so results do not depend on thread count.
BootstrapResult bootstrap(const EstimatorConfig& estimator, const PanelDataset& panel, Index B,
                          double level, std::uint64_t seed, int threads = 1);

}  // namespace orthoreg
