#pragma once

#include <cstdint>
#include <string>

#include "orthoreg/oracle.hpp"
#include "orthoreg/panel.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

enum class DgpKind { gaussian_scm, linear_nongaussian, cox_synthetic, hiv_like };

std::string dgp_kind_name(DgpKind k);
DgpKind dgp_kind_from_string(const std::string& s);

/// Simulation settings. Parameters irrelevant to the chosen kind are ignored.
struct DgpConfig {
  DgpKind kind = DgpKind::linear_nongaussian;
  Index n = 1000;
  Index T = 5;
  std::uint64_t seed = 1;

  // gaussian_scm
  double rho_ax = 0.6;
  double rho_xa = 0.4;
  double rho_ux = 0.5;
  double effect_a1 = 0.0;
  double effect_a2 = 0.0;

  // linear_nongaussian; a_to_x and x_to_a also drive cox_synthetic
  double a_to_x = 0.5;      // A_{t-1} -> X_t
  double u_to_x = 1.0;      // latent -> X_t
  double x_to_a = 1.0;      // logistic slope of A_t on X_t
  bool low_overlap = false; // 95/5 assignment by the sign of X_t
  double u_to_y = 1.0;
  Vector treatment_effects; // per-time effects on the linear predictor; empty = null

  // cox_synthetic
  double base_hazard = 0.12;       // per-subject rate drawn uniform on [h, 3h]
  double m_to_x = 0.6;             // frailty -> X_t (log-hazard scale)
  double log_hr_treatment = 0.0;   // treatment log hazard ratio (negative = protective)

  // hiv_like
  double hiv_effect = 0.0;         // treatment log hazard ratio
  double hiv_u_to_x = 1.0;
  double hiv_init_slope = 0.35;    // initiation log-odds per unit covariate drop

  void validate() const;
  static DgpConfig from_json_file(const std::string& path);
  std::string to_json() const;
};

/// Deterministic given the seed; identical seeds give bit-identical panels.
PanelDataset simulate(const DgpConfig& cfg);

/// Interventional mean draw for the non-survival kinds (forced treatments).
double simulate_intervened_outcome(const DgpConfig& cfg, const Vector& abar,
                                   std::mt19937_64& rng);

/// Interventional event-time draw for the survival kinds (no censoring).
double simulate_intervened_time(const DgpConfig& cfg, const Vector& abar, std::mt19937_64& rng);

}  // namespace orthoreg
