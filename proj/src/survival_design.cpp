#include "orthoreg/survival_design.hpp"

#include <algorithm>

namespace orthoreg {

std::vector<double> effective_time_grid(const PanelDataset& panel, const CoxOptions& opts) {
  if (!opts.time_grid.empty()) {
    if (static_cast<Index>(opts.time_grid.size()) != panel.T())
      throw DataError("time grid must have one entry per panel time");
    return opts.time_grid;
  }
  std::vector<double> grid(panel.T());
  for (Index t = 0; t < panel.T(); ++t) grid[t] = static_cast<double>(t);
  return grid;
}

SurvivalDesign build_survival_design(const PanelDataset& panel,
                                     const std::vector<Matrix>& xblocks,
                                     const std::string& x_prefix, const CoxOptions& opts,
                                     bool include_x, bool include_treatment) {
  if (panel.outcome_kind() != OutcomeKind::survival)
    throw DataError("survival design requires a survival outcome");
  const Index T = panel.T();
  const auto grid = effective_time_grid(panel, opts);
  for (Index t = 1; t < T; ++t)
    if (!(grid[t] > grid[t - 1])) throw DataError("time grid must be strictly increasing");

  // Split X_1 coordinates into baseline and time-varying; later times are all
  // time-varying and must share the time-varying count.
  std::vector<Index> base = opts.baseline_coords;
  std::sort(base.begin(), base.end());
  for (Index b : base)
    if (b < 0 || b >= panel.covariate_dims()[0])
      throw DataError("baseline coordinate out of range");
  std::vector<Index> tv_first;  // time-varying coords of X_1
  for (Index j = 0; j < panel.covariate_dims()[0]; ++j)
    if (!std::binary_search(base.begin(), base.end(), j)) tv_first.push_back(j);
  const Index d_tv = static_cast<Index>(tv_first.size());
  for (Index t = 2; t <= T; ++t)
    if (panel.covariate_dims()[t - 1] != d_tv)
      throw DataError("survival design: time-varying covariate count at time " +
                      std::to_string(t) + " is " +
                      std::to_string(panel.covariate_dims()[t - 1]) + ", expected " +
                      std::to_string(d_tv));

  SurvivalDesign design;
  for (Index b : base) design.column_names.push_back("base" + std::to_string(b + 1));
  if (include_x)
    for (Index j = 1; j <= d_tv; ++j)
      design.column_names.push_back(x_prefix + std::to_string(j));
  if (include_treatment) design.column_names.push_back("a");
  if (opts.cumavg) {
    if (include_x)
      for (Index j = 1; j <= d_tv; ++j)
        design.column_names.push_back("cumavg_" + x_prefix + std::to_string(j));
    if (include_treatment) design.column_names.push_back("cumavg_a");
  }
  const Index p = static_cast<Index>(design.column_names.size());
  if (p == 0) throw DataError("survival design has no columns");

  auto tv_value = [&](Index i, Index t, Index j) {
    return t == 1 ? xblocks[0](i, tv_first[j]) : xblocks[t - 1](i, j);
  };

  for (Index i = 0; i < panel.n(); ++i) {
    const double y = panel.survival_times()[i];
    const int event = panel.survival_events()[i];
    Vector cum_x = Vector::Zero(d_tv);
    double cum_a = 0.0;
    const bool truncated = y <= grid[0];  // ends before the first interval opens
    for (Index t = 1; t <= T; ++t) {
      for (Index j = 0; j < d_tv; ++j) cum_x[j] += tv_value(i, t, j);
      cum_a += panel.treatment(i, t);
      double start = truncated ? std::min(0.0, grid[0]) : grid[t - 1];
      if (!truncated && start >= y) break;
      double stop = truncated ? y : ((t < T) ? std::min(grid[t], y) : y);
      if (!(stop > start)) continue;

      CountingProcessRow r;
      r.subject_id = panel.ids()[i];
      r.tstart = start;
      r.tstop = stop;
      r.event = (stop == y) ? event : 0;
      r.covariates.resize(p);
      Index k = 0;
      for (Index b : base) r.covariates[k++] = xblocks[0](i, b);
      if (include_x)
        for (Index j = 0; j < d_tv; ++j) r.covariates[k++] = tv_value(i, t, j);
      if (include_treatment) r.covariates[k++] = panel.treatment(i, t);
      if (opts.cumavg) {
        double inv_t = 1.0 / static_cast<double>(t);
        if (include_x)
          for (Index j = 0; j < d_tv; ++j) r.covariates[k++] = cum_x[j] * inv_t;
        if (include_treatment) r.covariates[k++] = cum_a * inv_t;
      }
      design.rows.push_back(std::move(r));
      design.row_subject.push_back(i);
      if (truncated) break;
    }
  }
  return design;
}

}  // namespace orthoreg
