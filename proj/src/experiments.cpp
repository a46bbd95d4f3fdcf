#include "orthoreg/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "orthoreg/estimator.hpp"
#include "orthoreg/parallel.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

namespace {

struct RepStats {
  Matrix thetas;       // successful replicate coefficients
  Index n_failed = 0;
};

// One experiment cell: replicated simulate + fit for a single estimator.
RepStats replicate(const DgpConfig& dgp, const EstimatorConfig& est, Index reps,
                   std::uint64_t cell_seed, int threads) {
  std::vector<Vector> results(reps);
  std::vector<char> ok(reps, 0);
  parallel_for(reps, threads, [&](long r) {
    DgpConfig cfg = dgp;
    cfg.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(r), 17);
    try {
      PanelDataset panel = simulate(cfg);
      CausalEstimate ce = run_estimator(panel, est);
      results[r] = ce.theta;
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });
  RepStats out;
  Index good = 0;
  for (char c : ok) good += c;
  out.n_failed = reps - good;
  if (good == 0) return out;
  Index p = 0;
  for (Index r = 0; r < reps; ++r)
    if (ok[r]) p = results[r].size();
  out.thetas.resize(good, p);
  Index k = 0;
  for (Index r = 0; r < reps; ++r)
    if (ok[r] && results[r].size() == p) out.thetas.row(k++) = results[r].transpose();
  out.thetas.conservativeResize(k, p);
  return out;
}

double col_mean(const Matrix& m, Index j) { return m.col(j).mean(); }

double col_sd(const Matrix& m, Index j) {
  if (m.rows() < 2) return 0.0;
  double mean = m.col(j).mean();
  return std::sqrt((m.col(j).array() - mean).square().sum() /
                   static_cast<double>(m.rows() - 1));
}

double max_abs_mean(const Matrix& thetas) {
  double worst = 0.0;
  for (Index j = 0; j < thetas.cols(); ++j)
    worst = std::max(worst, std::abs(col_mean(thetas, j)));
  return worst;
}

double mean_variance(const Matrix& thetas) {
  double acc = 0.0;
  for (Index j = 0; j < thetas.cols(); ++j) {
    double sd = col_sd(thetas, j);
    acc += sd * sd;
  }
  return thetas.cols() > 0 ? acc / static_cast<double>(thetas.cols()) : 0.0;
}

void run_validity_linear(const ExperimentConfig& cfg, ExperimentResult& out) {
  out.columns = {"a_to_x", "estimator", "max_abs_coef", "replications", "n_failed"};
  Index cell = 0;
  for (double level : cfg.grid) {
    DgpConfig dgp = cfg.dgp;
    dgp.kind = DgpKind::linear_nongaussian;
    dgp.a_to_x = level;
    for (EstimatorTag tag : {EstimatorTag::naive, EstimatorTag::ortho}) {
      EstimatorConfig est = tag == EstimatorTag::naive
                                ? EstimatorConfig::naive(Family::ols)
                                : EstimatorConfig::ortho(Family::ols);
      RepStats stats = replicate(dgp, est, cfg.replications,
                                 derive_seed(cfg.seed, cell, 0), cfg.threads);
      ++cell;
      std::vector<std::string> row{format_cell(level), estimator_tag_name(tag)};
      if (stats.thetas.rows() == 0) {
        row.push_back("nan");
      } else {
        row.push_back(format_cell(max_abs_mean(stats.thetas)));
      }
      row.push_back(std::to_string(cfg.replications));
      row.push_back(std::to_string(stats.n_failed));
      out.rows.push_back(std::move(row));
    }
  }
}

void run_efficiency_linear(const ExperimentConfig& cfg, ExperimentResult& out) {
  out.columns = {"u_to_x", "overlap", "var_ipw", "var_ortho",
                 "var_ratio", "replications", "n_failed"};
  Index cell = 0;
  for (bool low : {false, true}) {
    for (double level : cfg.grid) {
      DgpConfig dgp = cfg.dgp;
      dgp.kind = DgpKind::linear_nongaussian;
      dgp.u_to_x = level;
      dgp.low_overlap = low;
      if (!low) dgp.x_to_a = 0.0;  // high overlap: assignment ignores the covariate

      EstimatorConfig ortho = EstimatorConfig::ortho(Family::ols);
      EstimatorConfig ipw = EstimatorConfig::ipw(Family::ols);
      std::uint64_t s = derive_seed(cfg.seed, cell, 0);
      RepStats so = replicate(dgp, ortho, cfg.replications, s, cfg.threads);
      RepStats si = replicate(dgp, ipw, cfg.replications, s, cfg.threads);
      ++cell;
      double vo = so.thetas.rows() > 1 ? mean_variance(so.thetas) : 0.0;
      double vi = si.thetas.rows() > 1 ? mean_variance(si.thetas) : 0.0;
      out.rows.push_back({format_cell(level), low ? "low" : "high", format_cell(vi),
                          format_cell(vo), format_cell(vo > 0 ? vi / vo : 0.0),
                          std::to_string(cfg.replications),
                          std::to_string(so.n_failed + si.n_failed)});
    }
  }
}

void run_validity_cox(const ExperimentConfig& cfg, ExperimentResult& out) {
  out.columns = {"a_to_x", "estimator", "mean_coef", "sd_coef",
                 "mc_se", "replications", "n_failed"};
  Index cell = 0;
  for (double level : cfg.grid) {
    DgpConfig dgp = cfg.dgp;
    dgp.kind = DgpKind::cox_synthetic;
    dgp.a_to_x = level;
    CoxOptions opts;
    opts.cumavg = true;
    for (EstimatorTag tag : {EstimatorTag::naive, EstimatorTag::ortho}) {
      EstimatorConfig est = tag == EstimatorTag::naive
                                ? EstimatorConfig::naive(Family::cox, opts)
                                : EstimatorConfig::ortho(Family::cox, opts);
      RepStats stats = replicate(dgp, est, cfg.replications,
                                 derive_seed(cfg.seed, cell, 0), cfg.threads);
      ++cell;
      std::vector<std::string> row{format_cell(level), estimator_tag_name(tag)};
      if (stats.thetas.rows() == 0) {
        row.insert(row.end(), {"nan", "nan", "nan"});
      } else {
        // Coefficient of interest: the cumulative-average treatment column
        // (second treatment column in the design).
        Index j = stats.thetas.cols() - 1;
        double mean = col_mean(stats.thetas, j);
        double sd = col_sd(stats.thetas, j);
        row.push_back(format_cell(mean));
        row.push_back(format_cell(sd));
        row.push_back(format_cell(sd / std::sqrt(static_cast<double>(stats.thetas.rows()))));
      }
      row.push_back(std::to_string(cfg.replications));
      row.push_back(std::to_string(stats.n_failed));
      out.rows.push_back(std::move(row));
    }
  }
}

void run_power_cox(const ExperimentConfig& cfg, ExperimentResult& out) {
  out.columns = {"x_to_a", "log_hr", "estimator", "mean_coef",
                 "sd_coef", "mean_z", "replications", "n_failed"};
  if (cfg.grid2.empty()) throw DataError("power_cox needs grid2 (treatment effects)");
  Index cell = 0;
  for (double strength : cfg.grid) {
    for (double effect : cfg.grid2) {
      DgpConfig dgp = cfg.dgp;
      dgp.kind = DgpKind::cox_synthetic;
      dgp.x_to_a = strength;
      dgp.log_hr_treatment = effect;
      MsmSpec msm;
      msm.design = MsmSpec::Design::current_treatment;
      std::vector<std::pair<EstimatorTag, EstimatorConfig>> estimators{
          {EstimatorTag::ortho, EstimatorConfig::ortho(Family::cox)},
          {EstimatorTag::ipw_msm, EstimatorConfig::ipw(Family::cox, {}, msm)}};
      for (auto& [tag, est] : estimators) {
        RepStats stats = replicate(dgp, est, cfg.replications,
                                   derive_seed(cfg.seed, cell, 0), cfg.threads);
        ++cell;
        std::vector<std::string> row{format_cell(strength), format_cell(effect),
                                     estimator_tag_name(tag)};
        if (stats.thetas.rows() < 2) {
          row.insert(row.end(), {"nan", "nan", "nan"});
        } else {
          double mean = col_mean(stats.thetas, 0);
          double sd = col_sd(stats.thetas, 0);
          row.push_back(format_cell(mean));
          row.push_back(format_cell(sd));
          row.push_back(format_cell(sd > 0 ? mean / sd : 0.0));
        }
        row.push_back(std::to_string(cfg.replications));
        row.push_back(std::to_string(stats.n_failed));
        out.rows.push_back(std::move(row));
      }
    }
  }
}

}  // namespace

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw DataError("experiment config: replications must be at least 1");
  if (grid.empty()) throw DataError("experiment config: grid is empty");
  if (figure != "validity_linear" && figure != "efficiency_linear" &&
      figure != "validity_cox" && figure != "power_cox")
    throw DataError("experiment config: unknown figure '" + figure + "'");
  dgp.validate();
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("'" + path + "': " + e.what());
  }
  if (j.contains("version") && j["version"].get<int>() != 1)
    throw DataError("'" + path + "': unsupported version");
  ExperimentConfig cfg;
  cfg.figure = j.at("figure").get<std::string>();
  {
    // Inline DGP block reuses the DgpConfig JSON reader via a temp file-free path.
    nlohmann::json d = j.at("dgp");
    DgpConfig base;
    base.kind = dgp_kind_from_string(d.at("kind").get<std::string>());
    if (d.contains("n")) base.n = d["n"].get<Index>();
    if (d.contains("T")) base.T = d["T"].get<Index>();
    auto get = [&](const char* key, double dflt) {
      return d.contains(key) ? d[key].get<double>() : dflt;
    };
    base.rho_ax = get("rho_ax", base.rho_ax);
    base.rho_xa = get("rho_xa", base.rho_xa);
    base.rho_ux = get("rho_ux", base.rho_ux);
    base.a_to_x = get("a_to_x", base.a_to_x);
    base.u_to_x = get("u_to_x", base.u_to_x);
    base.x_to_a = get("x_to_a", base.x_to_a);
    base.u_to_y = get("u_to_y", base.u_to_y);
    base.base_hazard = get("base_hazard", base.base_hazard);
    base.m_to_x = get("m_to_x", base.m_to_x);
    base.log_hr_treatment = get("log_hr_treatment", base.log_hr_treatment);
    base.hiv_effect = get("hiv_effect", base.hiv_effect);
    base.hiv_u_to_x = get("hiv_u_to_x", base.hiv_u_to_x);
    base.hiv_init_slope = get("hiv_init_slope", base.hiv_init_slope);
    if (d.contains("low_overlap")) base.low_overlap = d["low_overlap"].get<bool>();
    cfg.dgp = base;
  }
  cfg.grid = j.at("grid").get<std::vector<double>>();
  if (j.contains("grid2")) cfg.grid2 = j["grid2"].get<std::vector<double>>();
  if (j.contains("replications")) cfg.replications = j["replications"].get<Index>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("output")) cfg.output_path = j["output"].get<std::string>();
  cfg.validate();
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult out;
  out.figure = cfg.figure;
  nlohmann::json echo;
  echo["figure"] = cfg.figure;
  echo["replications"] = cfg.replications;
  echo["seed"] = cfg.seed;
  echo["grid"] = cfg.grid;
  if (!cfg.grid2.empty()) echo["grid2"] = cfg.grid2;
  echo["dgp"] = nlohmann::json::parse(cfg.dgp.to_json());
  out.config_echo = echo.dump();

  if (cfg.figure == "validity_linear") run_validity_linear(cfg, out);
  else if (cfg.figure == "efficiency_linear") run_efficiency_linear(cfg, out);
  else if (cfg.figure == "validity_cox") run_validity_cox(cfg, out);
  else run_power_cox(cfg, out);
  return out;
}

std::string ExperimentResult::to_csv() const {
  std::string s;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) s += ",";
    s += columns[c];
  }
  s += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ",";
      s += row[c];
    }
    s += "\n";
  }
  return s;
}

void ExperimentResult::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_csv();
}

std::vector<double> ExperimentResult::column_as_double(const std::string& name) const {
  Index ix = -1;
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) ix = static_cast<Index>(c);
  if (ix < 0) throw DataError("no experiment column named '" + name + "'");
  std::vector<double> vals;
  for (const auto& row : rows) vals.push_back(std::stod(row[static_cast<std::size_t>(ix)]));
  return vals;
}

}  // namespace orthoreg
