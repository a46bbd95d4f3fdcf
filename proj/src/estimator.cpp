#include "orthoreg/estimator.hpp"

namespace orthoreg {

EstimatorConfig EstimatorConfig::ortho(Family f, CoxOptions opts) {
  EstimatorConfig c;
  c.kind = EstimatorTag::ortho;
  c.family = f;
  c.cox = std::move(opts);
  return c;
}

EstimatorConfig EstimatorConfig::naive(Family f, CoxOptions opts) {
  EstimatorConfig c;
  c.kind = EstimatorTag::naive;
  c.family = f;
  c.cox = std::move(opts);
  return c;
}

EstimatorConfig EstimatorConfig::ipw(Family f, PropensitySpec prop, MsmSpec msm) {
  EstimatorConfig c;
  c.kind = EstimatorTag::ipw_msm;
  c.family = f;
  c.propensity = std::move(prop);
  c.msm = std::move(msm);
  return c;
}

CausalEstimate run_estimator(const PanelDataset& panel, const EstimatorConfig& cfg) {
  switch (cfg.kind) {
    case EstimatorTag::ortho: {
      OrthoPanel op = residualize(panel);
      FitResult fit = ortho_fit(op, cfg.family, cfg.cox);
      return extract_causal(fit, op);
    }
    case EstimatorTag::naive:
      return naive_fit(panel, cfg.family, cfg.cox);
    case EstimatorTag::ipw_msm: {
      IpwWeights w = stabilized_weights(panel, cfg.propensity);
      return ipw_msm_fit(panel, w, cfg.msm, cfg.family);
    }
  }
  throw DataError("run_estimator: unknown estimator kind");
}

}  // namespace orthoreg
