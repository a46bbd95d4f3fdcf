#pragma once

#include <string>
#include <vector>

#include "orthoreg/ortho.hpp"
#include "orthoreg/panel.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

/// Counting-process rows plus the design-column naming used by survival fits.
struct SurvivalDesign {
  std::vector<CountingProcessRow> rows;
  std::vector<std::string> column_names;
  std::vector<Index> row_subject;  // panel subject index per row
};

/// Shared row builder for survival fits. xblocks[t-1] supplies the covariate
/// block in force on interval t (residuals for orthogonalized fits, raw values
/// for naive fits); pass include_x = false for marginal designs in treatment
/// only. Baseline coordinates are taken from xblocks[0] and repeated on every
/// interval.
SurvivalDesign build_survival_design(const PanelDataset& panel,
                                     const std::vector<Matrix>& xblocks,
                                     const std::string& x_prefix, const CoxOptions& opts,
                                     bool include_x, bool include_treatment = true);

}  // namespace orthoreg
