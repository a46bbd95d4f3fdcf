#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthoreg/panel.hpp"

namespace orthoreg {

/// Column mapping for long-format panel CSV: one row per (subject, time) with
/// the per-subject outcome block repeated on each row, or held in a separate
/// outcome file keyed by subject id.
struct CsvSchema {
  std::string id_col = "id";
  std::string time_col = "t";
  std::vector<std::string> covariate_cols;  // coordinate order
  std::string treatment_col = "a";
  OutcomeKind outcome_kind = OutcomeKind::continuous;
  std::string outcome_col = "y";            // continuous / count / binary
  std::string time_to_event_col = "y_time";  // survival
  std::string event_col = "y_event";         // survival
  std::optional<std::string> outcome_file;

  static CsvSchema standard(OutcomeKind kind, Index covariate_count);
  static CsvSchema from_json_file(const std::string& path);
};

/// Loads and validates a panel. A covariate column that is empty for every
/// subject at some time marks the coordinate as absent at that time; an empty
/// cell anywhere else is a hard error.
PanelDataset load_panel_csv(const std::string& path, const CsvSchema& schema);

/// Long-format writer; numeric cells carry full double precision so that a
/// reload reproduces the panel exactly.
void write_panel_csv(const PanelDataset& panel, const std::string& path,
                     const CsvSchema& schema);
void write_panel_csv(const PanelDataset& panel, const std::string& path);

}  // namespace orthoreg
