#include "orthoreg/dgp.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "orthoreg/rng.hpp"

namespace orthoreg {

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Mean-zero, right-skewed, heavy-tailed noise: exp(Z) - exp(1/2).
double lognormal_noise(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  return std::exp(gauss(rng)) - std::exp(0.5);
}

struct LinearTrajectory {
  Vector x, a;
  double u = 0.0;
};

// Covariate/treatment recursion shared by the observational and forced paths.
LinearTrajectory linear_nongaussian_path(const DgpConfig& cfg, std::mt19937_64& rng,
                                         const Vector* forced) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  LinearTrajectory tr;
  tr.x.resize(cfg.T);
  tr.a.resize(cfg.T);
  tr.u = gauss(rng);
  double prev_a = 0.0;
  for (Index t = 0; t < cfg.T; ++t) {
    tr.x[t] = cfg.a_to_x * prev_a + cfg.u_to_x * tr.u + gauss(rng);
    if (forced) {
      tr.a[t] = (*forced)[t];
    } else if (cfg.low_overlap) {
      double p = tr.x[t] > 0.0 ? 0.95 : 0.05;
      tr.a[t] = unif(rng) < p ? 1.0 : 0.0;
    } else {
      tr.a[t] = unif(rng) < sigmoid(cfg.x_to_a * tr.x[t]) ? 1.0 : 0.0;
    }
    prev_a = tr.a[t];
  }
  return tr;
}

double linear_nongaussian_outcome(const DgpConfig& cfg, const LinearTrajectory& tr,
                                  std::mt19937_64& rng) {
  double y = cfg.u_to_y * tr.u + lognormal_noise(rng);
  if (cfg.treatment_effects.size() > 0) {
    if (cfg.treatment_effects.size() != cfg.T)
      throw DataError("treatment_effects must have one entry per time point");
    y += cfg.treatment_effects.dot(tr.a);
  }
  return y;
}

struct CoxTrajectory {
  Vector x, a;
  double rate = 0.0;  // subject hazard rate on each unit interval, before treatment
};

CoxTrajectory cox_synthetic_path(const DgpConfig& cfg, std::mt19937_64& rng,
                                 const Vector* forced) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CoxTrajectory tr;
  tr.x.resize(cfg.T);
  tr.a.resize(cfg.T);
  // Per-subject baseline rate spanning a factor of 3 across the population.
  std::uniform_real_distribution<double> frailty(cfg.base_hazard, 3.0 * cfg.base_hazard);
  tr.rate = frailty(rng);
  // The covariate sees the frailty on the log-hazard scale, standardized with
  // the population moments of log V, V ~ U[1,3].
  const double log3 = std::log(3.0);
  const double mean_logv = 1.5 * log3 - 1.0;
  const double sd_logv =
      std::sqrt((3.0 * (log3 * log3 - 2.0 * log3 + 2.0) - 2.0) / 2.0 - mean_logv * mean_logv);
  double z_m = (std::log(tr.rate / cfg.base_hazard) - mean_logv) / sd_logv;
  double prev_a = 0.0;
  for (Index t = 0; t < cfg.T; ++t) {
    tr.x[t] = cfg.a_to_x * prev_a + cfg.m_to_x * z_m + gauss(rng);
    tr.a[t] = forced ? (*forced)[t]
                     : (unif(rng) < sigmoid(cfg.x_to_a * tr.x[t]) ? 1.0 : 0.0);
    prev_a = tr.a[t];
  }
  return tr;
}

// Piecewise-exponential inversion on unit intervals; +inf if beyond T.
double piecewise_exp_time(const Vector& interval_rates, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  double e = exp1(rng);
  double acc = 0.0;
  for (Index t = 0; t < interval_rates.size(); ++t) {
    double lam = interval_rates[t];
    if (acc + lam >= e) return static_cast<double>(t) + (e - acc) / lam;
    acc += lam;
  }
  return std::numeric_limits<double>::infinity();
}

Vector cox_interval_rates(const DgpConfig& cfg, const CoxTrajectory& tr) {
  Vector rates(cfg.T);
  for (Index t = 0; t < cfg.T; ++t)
    rates[t] = tr.rate * std::exp(cfg.log_hr_treatment * tr.a[t]);
  return rates;
}

struct HivTrajectory {
  double age = 0.0, sex = 0.0, u = 0.0;
  Vector x, a;
};

HivTrajectory hiv_like_path(const DgpConfig& cfg, std::mt19937_64& rng, const Vector* forced) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  HivTrajectory tr;
  tr.age = 35.0 + 10.0 * gauss(rng);
  tr.sex = unif(rng) < 0.5 ? 1.0 : 0.0;
  tr.u = gauss(rng);
  tr.x.resize(cfg.T);
  tr.a.resize(cfg.T);
  double prev_x = 25.0, prev_a = 0.0;
  for (Index t = 0; t < cfg.T; ++t) {
    // Square-root CD4 scale: declines over time, recovers under treatment.
    double drift = (t == 0) ? 0.0 : -0.8;
    tr.x[t] = prev_x + drift + 0.9 * prev_a + cfg.hiv_u_to_x * tr.u + 0.8 * gauss(rng);
    if (forced) {
      tr.a[t] = (*forced)[t];
    } else if (prev_a == 1.0) {
      tr.a[t] = 1.0;  // treatment continues once initiated
    } else {
      double p = sigmoid(-2.2 + cfg.hiv_init_slope * (20.0 - tr.x[t]));
      tr.a[t] = unif(rng) < p ? 1.0 : 0.0;
    }
    prev_x = tr.x[t];
    prev_a = tr.a[t];
  }
  return tr;
}

Vector hiv_interval_rates(const DgpConfig& cfg, const HivTrajectory& tr) {
  Vector rates(cfg.T);
  for (Index t = 0; t < cfg.T; ++t) {
    double lp = 0.35 * (tr.age - 35.0) / 10.0 + 0.25 * tr.sex + 0.10 * (20.0 - tr.x[t]) +
                0.45 * tr.u + cfg.hiv_effect * tr.a[t];
    rates[t] = 0.012 * std::exp(lp);
  }
  return rates;
}

}  // namespace

std::string dgp_kind_name(DgpKind k) {
  switch (k) {
    case DgpKind::gaussian_scm: return "gaussian_scm";
    case DgpKind::linear_nongaussian: return "linear_nongaussian";
    case DgpKind::cox_synthetic: return "cox_synthetic";
    case DgpKind::hiv_like: return "hiv_like";
  }
  return "?";
}

DgpKind dgp_kind_from_string(const std::string& s) {
  if (s == "gaussian_scm") return DgpKind::gaussian_scm;
  if (s == "linear_nongaussian") return DgpKind::linear_nongaussian;
  if (s == "cox_synthetic") return DgpKind::cox_synthetic;
  if (s == "hiv_like") return DgpKind::hiv_like;
  throw DataError("unknown dgp kind '" + s + "'");
}

void DgpConfig::validate() const {
  if (n <= 0) throw DataError("dgp config: n must be positive");
  if (T < 1) throw DataError("dgp config: T must be at least 1");
  if (kind == DgpKind::gaussian_scm) {
    GaussianScm check(rho_ax, rho_xa, rho_ux);  // throws on invalid correlations
    (void)check;
  }
  if (kind == DgpKind::cox_synthetic && base_hazard <= 0.0)
    throw DataError("dgp config: base_hazard must be positive");
  if (treatment_effects.size() > 0 && treatment_effects.size() != T)
    throw DataError("dgp config: treatment_effects must match T");
}

PanelDataset simulate(const DgpConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case DgpKind::gaussian_scm: {
      std::optional<std::pair<double, double>> effects;
      if (cfg.effect_a1 != 0.0 || cfg.effect_a2 != 0.0)
        effects = std::make_pair(cfg.effect_a1, cfg.effect_a2);
      return GaussianScm(cfg.rho_ax, cfg.rho_xa, cfg.rho_ux, effects)
          .simulate_panel(cfg.n, cfg.seed);
    }
    case DgpKind::linear_nongaussian: {
      std::vector<SubjectRecord> subjects;
      subjects.reserve(cfg.n);
      for (Index i = 0; i < cfg.n; ++i) {
        auto rng = substream(cfg.seed, "dgp", static_cast<std::uint64_t>(i));
        LinearTrajectory tr = linear_nongaussian_path(cfg, rng, nullptr);
        double y = linear_nongaussian_outcome(cfg, tr, rng);
        SubjectRecord s;
        s.id = "s" + std::to_string(i + 1);
        s.covariates.resize(cfg.T);
        s.treatments.resize(cfg.T);
        for (Index t = 0; t < cfg.T; ++t) {
          s.covariates[t] = Vector::Constant(1, tr.x[t]);
          s.treatments[t] = tr.a[t];
        }
        s.outcome = Outcome::continuous(y);
        subjects.push_back(std::move(s));
      }
      return PanelDataset::build(std::move(subjects));
    }
    case DgpKind::cox_synthetic: {
      std::vector<SubjectRecord> subjects;
      subjects.reserve(cfg.n);
      const double censor = static_cast<double>(cfg.T);
      for (Index i = 0; i < cfg.n; ++i) {
        auto rng = substream(cfg.seed, "dgp", static_cast<std::uint64_t>(i));
        CoxTrajectory tr = cox_synthetic_path(cfg, rng, nullptr);
        double y = piecewise_exp_time(cox_interval_rates(cfg, tr), rng);
        int event = y <= censor ? 1 : 0;
        if (!event) y = censor;
        SubjectRecord s;
        s.id = "s" + std::to_string(i + 1);
        s.covariates.resize(cfg.T);
        s.treatments.resize(cfg.T);
        for (Index t = 0; t < cfg.T; ++t) {
          s.covariates[t] = Vector::Constant(1, tr.x[t]);
          s.treatments[t] = tr.a[t];
        }
        s.outcome = Outcome::survival(y, event);
        subjects.push_back(std::move(s));
      }
      return PanelDataset::build(std::move(subjects));
    }
    case DgpKind::hiv_like: {
      std::vector<SubjectRecord> subjects;
      subjects.reserve(cfg.n);
      const double censor = static_cast<double>(cfg.T);
      for (Index i = 0; i < cfg.n; ++i) {
        auto rng = substream(cfg.seed, "dgp", static_cast<std::uint64_t>(i));
        HivTrajectory tr = hiv_like_path(cfg, rng, nullptr);
        double y = piecewise_exp_time(hiv_interval_rates(cfg, tr), rng);
        int event = y <= censor ? 1 : 0;
        if (!event) y = censor;
        SubjectRecord s;
        s.id = "s" + std::to_string(i + 1);
        s.covariates.resize(cfg.T);
        s.treatments.resize(cfg.T);
        for (Index t = 0; t < cfg.T; ++t) {
          // Baseline covariates ride on the first block only.
          if (t == 0) {
            s.covariates[t] = Vector(3);
            s.covariates[t] << tr.age, tr.sex, tr.x[t];
          } else {
            s.covariates[t] = Vector::Constant(1, tr.x[t]);
          }
          s.treatments[t] = tr.a[t];
        }
        s.outcome = Outcome::survival(y, event);
        subjects.push_back(std::move(s));
      }
      return PanelDataset::build(std::move(subjects));
    }
  }
  throw DataError("simulate: unknown dgp kind");
}

double simulate_intervened_outcome(const DgpConfig& cfg, const Vector& abar,
                                   std::mt19937_64& rng) {
  switch (cfg.kind) {
    case DgpKind::gaussian_scm: {
      std::optional<std::pair<double, double>> effects;
      if (cfg.effect_a1 != 0.0 || cfg.effect_a2 != 0.0)
        effects = std::make_pair(cfg.effect_a1, cfg.effect_a2);
      return GaussianScm(cfg.rho_ax, cfg.rho_xa, cfg.rho_ux, effects)
          .draw_intervened(abar, rng);
    }
    case DgpKind::linear_nongaussian: {
      LinearTrajectory tr = linear_nongaussian_path(cfg, rng, &abar);
      return linear_nongaussian_outcome(cfg, tr, rng);
    }
    default:
      throw DataError("simulate_intervened_outcome: survival kinds draw event times");
  }
}

double simulate_intervened_time(const DgpConfig& cfg, const Vector& abar,
                                std::mt19937_64& rng) {
  switch (cfg.kind) {
    case DgpKind::cox_synthetic: {
      CoxTrajectory tr = cox_synthetic_path(cfg, rng, &abar);
      return piecewise_exp_time(cox_interval_rates(cfg, tr), rng);
    }
    case DgpKind::hiv_like: {
      HivTrajectory tr = hiv_like_path(cfg, rng, &abar);
      return piecewise_exp_time(hiv_interval_rates(cfg, tr), rng);
    }
    default:
      throw DataError("simulate_intervened_time: not a survival dgp");
  }
}

DgpConfig DgpConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("'" + path + "': " + e.what());
  }
  DgpConfig cfg;
  if (j.contains("version") && j["version"].get<int>() != 1)
    throw DataError("'" + path + "': unsupported version");
  cfg.kind = dgp_kind_from_string(j.at("kind").get<std::string>());
  auto get = [&](const char* key, double dflt) {
    return j.contains(key) ? j[key].get<double>() : dflt;
  };
  if (j.contains("n")) cfg.n = j["n"].get<Index>();
  if (j.contains("T")) cfg.T = j["T"].get<Index>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.rho_ax = get("rho_ax", cfg.rho_ax);
  cfg.rho_xa = get("rho_xa", cfg.rho_xa);
  cfg.rho_ux = get("rho_ux", cfg.rho_ux);
  cfg.effect_a1 = get("effect_a1", cfg.effect_a1);
  cfg.effect_a2 = get("effect_a2", cfg.effect_a2);
  cfg.a_to_x = get("a_to_x", cfg.a_to_x);
  cfg.u_to_x = get("u_to_x", cfg.u_to_x);
  cfg.x_to_a = get("x_to_a", cfg.x_to_a);
  if (j.contains("low_overlap")) cfg.low_overlap = j["low_overlap"].get<bool>();
  cfg.u_to_y = get("u_to_y", cfg.u_to_y);
  if (j.contains("treatment_effects")) {
    auto v = j["treatment_effects"].get<std::vector<double>>();
    cfg.treatment_effects = Eigen::Map<Vector>(v.data(), static_cast<Index>(v.size()));
  }
  cfg.base_hazard = get("base_hazard", cfg.base_hazard);
  cfg.m_to_x = get("m_to_x", cfg.m_to_x);
  cfg.log_hr_treatment = get("log_hr_treatment", cfg.log_hr_treatment);
  cfg.hiv_effect = get("hiv_effect", cfg.hiv_effect);
  cfg.hiv_u_to_x = get("hiv_u_to_x", cfg.hiv_u_to_x);
  cfg.hiv_init_slope = get("hiv_init_slope", cfg.hiv_init_slope);
  cfg.validate();
  return cfg;
}

std::string DgpConfig::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["kind"] = dgp_kind_name(kind);
  j["n"] = n;
  j["T"] = T;
  j["seed"] = seed;
  switch (kind) {
    case DgpKind::gaussian_scm:
      j["rho_ax"] = rho_ax;
      j["rho_xa"] = rho_xa;
      j["rho_ux"] = rho_ux;
      j["effect_a1"] = effect_a1;
      j["effect_a2"] = effect_a2;
      break;
    case DgpKind::linear_nongaussian:
      j["a_to_x"] = a_to_x;
      j["u_to_x"] = u_to_x;
      j["x_to_a"] = x_to_a;
      j["low_overlap"] = low_overlap;
      j["u_to_y"] = u_to_y;
      break;
    case DgpKind::cox_synthetic:
      j["a_to_x"] = a_to_x;
      j["x_to_a"] = x_to_a;
      j["base_hazard"] = base_hazard;
      j["m_to_x"] = m_to_x;
      j["log_hr_treatment"] = log_hr_treatment;
      break;
    case DgpKind::hiv_like:
      j["hiv_effect"] = hiv_effect;
      j["hiv_u_to_x"] = hiv_u_to_x;
      j["hiv_init_slope"] = hiv_init_slope;
      break;
  }
  if (treatment_effects.size() > 0) {
    std::vector<double> v(treatment_effects.data(),
                          treatment_effects.data() + treatment_effects.size());
    j["treatment_effects"] = v;
  }
  return j.dump(2);
}

}  // namespace orthoreg
