#pragma once

#include <string>

#include "orthoreg/baselines.hpp"
#include "orthoreg/ortho.hpp"
#include "orthoreg/panel.hpp"

namespace orthoreg {

/// A named, self-contained estimation recipe: everything needed to turn a
/// panel into a CausalEstimate, so the bootstrap and the experiment runner can
/// refit from scratch on resampled data.
struct EstimatorConfig {
  EstimatorTag kind = EstimatorTag::ortho;
  Family family = Family::ols;
  CoxOptions cox;            // survival designs (ortho and naive)
  PropensitySpec propensity; // ipw_msm
  MsmSpec msm;               // ipw_msm

  static EstimatorConfig ortho(Family f, CoxOptions opts = {});
  static EstimatorConfig naive(Family f, CoxOptions opts = {});
  static EstimatorConfig ipw(Family f, PropensitySpec prop = {}, MsmSpec msm = {});
};

CausalEstimate run_estimator(const PanelDataset& panel, const EstimatorConfig& cfg);

}  // namespace orthoreg
