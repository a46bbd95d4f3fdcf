// Command-line front end: simulate panels, fit estimators, bootstrap, run
// replication experiments, and check positivity, all from CSV/JSON inputs.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthoreg/bootstrap.hpp"
#include "orthoreg/csv.hpp"
#include "orthoreg/dgp.hpp"
#include "orthoreg/estimator.hpp"
#include "orthoreg/experiments.hpp"
#include "orthoreg/parallel.hpp"
#include "orthoreg/positivity.hpp"

namespace {

using namespace orthoreg;

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  return (std::filesystem::path(dir) / file).string();
}

CsvSchema resolve_schema(const std::string& schema_path, const std::string& family,
                         const std::string& panel_path) {
  if (!schema_path.empty()) return CsvSchema::from_json_file(schema_path);
  // Conventional columns: id, t, x1..xd, a, y or (y_time, y_event).
  std::ifstream in(panel_path);
  if (!in) throw DataError("cannot open '" + panel_path + "'");
  std::string header;
  std::getline(in, header);
  Index d = 0;
  {
    std::stringstream ss(header);
    std::string cell;
    while (std::getline(ss, cell, ','))
      if (cell.size() > 1 && cell[0] == 'x' && cell.find('_') == std::string::npos &&
          std::isdigit(static_cast<unsigned char>(cell[1])))
        ++d;
  }
  OutcomeKind kind = OutcomeKind::continuous;
  if (family == "cox") kind = OutcomeKind::survival;
  else if (family == "poisson_log" || family == "poisson") kind = OutcomeKind::count;
  else if (family == "probit" || family == "logistic") kind = OutcomeKind::binary;
  return CsvSchema::standard(kind, d);
}

void print_estimate(const CausalEstimate& est, std::ostream& os) {
  os << "coefficient,estimate\n";
  for (std::size_t j = 0; j < est.names.size(); ++j)
    os << est.names[j] << "," << format_cell(est.theta[static_cast<Index>(j)]) << "\n";
  if (est.alpha_prime) os << "alpha_prime," << format_cell(*est.alpha_prime) << "\n";
  if (est.rescale_sigma2) os << "rescale_sigma2," << format_cell(*est.rescale_sigma2) << "\n";
}

std::vector<Index> parse_coord_list(const std::string& csv) {
  std::vector<Index> coords;
  if (csv.empty()) return coords;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) coords.push_back(std::stol(cell) - 1);
  return coords;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthoreg: causal effect estimation for longitudinal panels"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = default_thread_count();
  std::string output_dir;
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--threads", threads, "worker threads (default: ORTHOREG_THREADS or 1)");
  app.add_option("--output-dir", output_dir, "directory for output files");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a synthetic panel and write it as CSV");
  std::string sim_kind = "linear_nongaussian", sim_out = "panel.csv", sim_config;
  Index sim_n = 1000, sim_T = 5;
  double sim_a_to_x = 0.5, sim_u_to_x = 1.0, sim_x_to_a = 1.0, sim_rho_ax = 0.6,
         sim_rho_xa = 0.4, sim_rho_ux = 0.5, sim_log_hr = 0.0, sim_hiv_effect = 0.0;
  bool sim_low_overlap = false;
  sim->add_option("--kind", sim_kind, "gaussian_scm | linear_nongaussian | cox_synthetic | hiv_like");
  sim->add_option("--n", sim_n, "subjects");
  sim->add_option("--T", sim_T, "time points");
  sim->add_option("--a-to-x", sim_a_to_x, "effect of A_{t-1} on X_t");
  sim->add_option("--u-to-x", sim_u_to_x, "latent effect on X_t");
  sim->add_option("--x-to-a", sim_x_to_a, "assignment log-odds slope in X_t");
  sim->add_flag("--low-overlap", sim_low_overlap, "95/5 assignment by the sign of X_t");
  sim->add_option("--rho-ax", sim_rho_ax, "gaussian_scm: A1->X2");
  sim->add_option("--rho-xa", sim_rho_xa, "gaussian_scm: X2->A2");
  sim->add_option("--rho-ux", sim_rho_ux, "gaussian_scm: U->X2");
  sim->add_option("--log-hr", sim_log_hr, "cox_synthetic: treatment log hazard ratio");
  sim->add_option("--hiv-effect", sim_hiv_effect, "hiv_like: treatment log hazard ratio");
  sim->add_option("--config", sim_config, "JSON DGP config (overrides the flags)");
  sim->add_option("--out", sim_out, "output CSV path");

  // fit
  auto* fit = app.add_subcommand("fit", "estimate causal effects from a panel CSV");
  std::string fit_estimator = "ortho", fit_family = "ols", fit_schema, fit_panel;
  std::string fit_baseline_coords;
  bool fit_cumavg = false;
  fit->add_option("--estimator", fit_estimator, "ortho | naive | ipw_msm");
  fit->add_option("--family", fit_family, "ols | poisson_log | probit | logistic | cox");
  fit->add_option("--schema", fit_schema, "JSON schema for the CSV columns");
  fit->add_flag("--cumavg", fit_cumavg, "survival: add cumulative-average columns");
  fit->add_option("--baseline-coords", fit_baseline_coords,
                  "survival: 1-based X_1 coordinates treated as baseline, comma separated");
  fit->add_option("panel", fit_panel, "panel CSV")->required();

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "subject-level bootstrap of an estimator");
  std::string boot_estimator = "ortho", boot_family = "ols", boot_schema, boot_panel;
  std::string boot_baseline_coords;
  bool boot_cumavg = false;
  Index boot_B = 200;
  double boot_level = 0.9;
  boot->add_option("--estimator", boot_estimator, "ortho | naive | ipw_msm");
  boot->add_option("--family", boot_family, "ols | cox | ...");
  boot->add_option("--schema", boot_schema, "JSON schema for the CSV columns");
  boot->add_flag("--cumavg", boot_cumavg, "survival: add cumulative-average columns");
  boot->add_option("--baseline-coords", boot_baseline_coords,
                   "survival: baseline X_1 coordinates, comma separated");
  boot->add_option("--B", boot_B, "bootstrap replicates");
  boot->add_option("--level", boot_level, "confidence level");
  boot->add_option("panel", boot_panel, "panel CSV")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a replication study from a JSON config");
  std::string exp_config;
  exp->add_option("config", exp_config, "experiment JSON config")->required();

  // check-positivity
  auto* pos = app.add_subcommand("check-positivity", "propensity overlap diagnostics");
  std::string pos_panel, pos_schema;
  double pos_eps = 0.05;
  pos->add_option("--epsilon", pos_eps, "positivity bound");
  pos->add_option("--schema", pos_schema, "JSON schema for the CSV columns");
  pos->add_option("panel", pos_panel, "panel CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      DgpConfig cfg;
      if (!sim_config.empty()) {
        cfg = DgpConfig::from_json_file(sim_config);
      } else {
        cfg.kind = dgp_kind_from_string(sim_kind);
        cfg.n = sim_n;
        cfg.T = sim_T;
        cfg.a_to_x = sim_a_to_x;
        cfg.u_to_x = sim_u_to_x;
        cfg.x_to_a = sim_x_to_a;
        cfg.low_overlap = sim_low_overlap;
        cfg.rho_ax = sim_rho_ax;
        cfg.rho_xa = sim_rho_xa;
        cfg.rho_ux = sim_rho_ux;
        cfg.log_hr_treatment = sim_log_hr;
        cfg.hiv_effect = sim_hiv_effect;
        if (cfg.kind == DgpKind::gaussian_scm) cfg.T = 2;
        if (cfg.kind == DgpKind::hiv_like && sim->count("--T") == 0) cfg.T = 15;
      }
      cfg.seed = seed;
      PanelDataset panel = simulate(cfg);
      write_panel_csv(panel, join_path(output_dir, sim_out));
      std::cout << "wrote " << join_path(output_dir, sim_out) << " (" << panel.n()
                << " subjects, T=" << panel.T() << ")\n";
      return 0;
    }

    if (*fit) {
      CsvSchema schema = resolve_schema(fit_schema, fit_family, fit_panel);
      PanelDataset panel = load_panel_csv(fit_panel, schema);
      EstimatorConfig cfg;
      cfg.family = family_from_string(fit_family);
      cfg.kind = fit_estimator == "ortho"   ? EstimatorTag::ortho
                 : fit_estimator == "naive" ? EstimatorTag::naive
                                            : EstimatorTag::ipw_msm;
      cfg.cox.cumavg = fit_cumavg;
      cfg.cox.baseline_coords = parse_coord_list(fit_baseline_coords);
      cfg.msm.baseline_coords = cfg.cox.baseline_coords;
      cfg.propensity.baseline_coords = cfg.cox.baseline_coords;
      CausalEstimate est = run_estimator(panel, cfg);
      print_estimate(est, std::cout);
      return 0;
    }

    if (*boot) {
      CsvSchema schema = resolve_schema(boot_schema, boot_family, boot_panel);
      PanelDataset panel = load_panel_csv(boot_panel, schema);
      EstimatorConfig cfg;
      cfg.family = family_from_string(boot_family);
      cfg.kind = boot_estimator == "ortho"   ? EstimatorTag::ortho
                 : boot_estimator == "naive" ? EstimatorTag::naive
                                             : EstimatorTag::ipw_msm;
      cfg.cox.cumavg = boot_cumavg;
      cfg.cox.baseline_coords = parse_coord_list(boot_baseline_coords);
      cfg.msm.baseline_coords = cfg.cox.baseline_coords;
      cfg.propensity.baseline_coords = cfg.cox.baseline_coords;
      BootstrapResult res = bootstrap(cfg, panel, boot_B, boot_level, seed, threads);
      std::cout << "coefficient,estimate,se,z,ci_lower,ci_upper\n";
      for (std::size_t j = 0; j < res.names.size(); ++j) {
        Index k = static_cast<Index>(j);
        std::cout << res.names[j] << "," << format_cell(res.point[k]) << ","
                  << format_cell(res.se[k]) << "," << format_cell(res.z[k]) << ","
                  << format_cell(res.ci_lower[k]) << "," << format_cell(res.ci_upper[k]) << "\n";
      }
      for (const auto& wmsg : res.warnings) std::cerr << "warning: " << wmsg << "\n";
      return 0;
    }

    if (*exp) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(exp_config);
      if (app.count("--seed")) cfg.seed = seed;
      if (app.count("--threads")) cfg.threads = threads;
      ExperimentResult result = run_experiment(cfg);
      std::string out_path = cfg.output_path.empty() ? cfg.figure + ".csv" : cfg.output_path;
      out_path = join_path(output_dir, out_path);
      result.write_csv(out_path);
      std::cout << "wrote " << out_path << " (" << result.rows.size() << " rows)\n";
      return 0;
    }

    if (*pos) {
      CsvSchema schema = resolve_schema(pos_schema, "ols", pos_panel);
      PanelDataset panel = load_panel_csv(pos_panel, schema);
      PositivityReport report = check_positivity(panel, pos_eps);
      std::cout << report.to_string();
      return report.any_failure ? 2 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
