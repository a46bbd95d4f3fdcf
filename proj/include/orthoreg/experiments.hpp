#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orthoreg/dgp.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

/// Replication-study definitions. Each figure id names a fixed cell layout:
///   validity_linear    - max |treatment coefficient| vs the A->X effect,
///                        naive and orthogonalized least squares
///   efficiency_linear  - Var(ipw)/Var(ortho) over the latent-effect grid,
///                        high and low overlap
///   validity_cox       - mean cumulative-average treatment coefficient vs the
///                        A->X effect, naive and orthogonalized Cox
///   power_cox          - mean z of the treatment coefficient over effect
///                        sizes, per treatment-assignment strength
struct ExperimentConfig {
  std::string figure;       // validity_linear | efficiency_linear | validity_cox | power_cox
  DgpConfig dgp;            // base settings; grids override per cell
  std::vector<double> grid;   // primary parameter values
  std::vector<double> grid2;  // power_cox: treatment log-hazard ratios
  Index replications = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output_path;  // optional; CLI writes the table here

  static ExperimentConfig from_json_file(const std::string& path);
  void validate() const;
};

struct ExperimentResult {
  std::string figure;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string config_echo;  // JSON of the resolved configuration

  std::string to_csv() const;
  void write_csv(const std::string& path) const;
  /// Numeric view of a column.
  std::vector<double> column_as_double(const std::string& name) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Fixed-precision cell formatting shared by all result tables so reruns are
/// byte-identical.
std::string format_cell(double v);

}  // namespace orthoreg
