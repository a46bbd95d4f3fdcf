#pragma once

#include <string>
#include <vector>

#include "orthoreg/errors.hpp"
#include "orthoreg/types.hpp"

namespace orthoreg {

enum class OutcomeKind { continuous, count, binary, survival };

std::string outcome_kind_name(OutcomeKind k);
OutcomeKind outcome_kind_from_string(const std::string& s);

/// Tagged outcome. Count values are stored as nonnegative reals so that
/// population-level (probability-weighted) fits can use fractional means.
class Outcome {
 public:
  static Outcome continuous(double y);
  static Outcome count(double y);      // y >= 0
  static Outcome binary(double y);     // y in {0, 1}
  static Outcome survival(double time, int event);  // time > 0, event in {0, 1}

  OutcomeKind kind() const { return kind_; }
  double value() const;       // continuous / count / binary
  double time() const;        // survival
  int event() const;          // survival; 0 means right-censored

 private:
  OutcomeKind kind_ = OutcomeKind::continuous;
  double value_ = 0.0;
  double time_ = 0.0;
  int event_ = 0;
};

/// One subject's trajectory, used to build panels and returned by accessors.
struct SubjectRecord {
  std::string id;
  std::vector<Vector> covariates;  // X_1..X_T, dimension may vary with t
  std::vector<double> treatments;  // A_1..A_T
  Outcome outcome;
};

/// Immutable equal-length panel. Stored columnwise: covariates[t] is n x d_t.
class PanelDataset {
 public:
  static PanelDataset build(std::vector<SubjectRecord> subjects);

  Index n() const { return static_cast<Index>(ids_.size()); }
  Index T() const { return static_cast<Index>(covariates_.size()); }
  const std::vector<Index>& covariate_dims() const { return dims_; }
  OutcomeKind outcome_kind() const { return kind_; }

  const std::vector<std::string>& ids() const { return ids_; }
  /// Covariate values at time t (1-based): n x covariate_dims[t-1].
  const Matrix& covariates(Index t) const { return covariates_[t - 1]; }
  /// Treatments, n x T.
  const Matrix& treatments() const { return treatments_; }
  double treatment(Index subject, Index t) const { return treatments_(subject, t - 1); }

  // Outcome columns; which are populated depends on outcome_kind.
  const Vector& outcome_values() const { return y_; }
  const Vector& survival_times() const { return y_time_; }
  const Eigen::VectorXi& survival_events() const { return y_event_; }

  Outcome outcome(Index subject) const;
  SubjectRecord subject(Index i) const;

  /// Panel restricted to the given subject indices (with repetition allowed;
  /// ids are suffixed to stay unique). Used by the bootstrap.
  PanelDataset resample(const std::vector<Index>& indices) const;

 private:
  std::vector<std::string> ids_;
  std::vector<Index> dims_;
  std::vector<Matrix> covariates_;
  Matrix treatments_;
  OutcomeKind kind_ = OutcomeKind::continuous;
  Vector y_;
  Vector y_time_;
  Eigen::VectorXi y_event_;
};

/// One at-risk interval (tstart, tstop] with the covariates in force on it.
struct CountingProcessRow {
  std::string subject_id;
  double tstart = 0.0;
  double tstop = 0.0;
  int event = 0;
  Vector covariates;
};

/// Expands a survival panel onto a time grid. time_grid[t-1] is when
/// (X_t, A_t) takes effect; the final interval is open-ended. Row covariates
/// are (X_t..., A_t). Censoring exactly on a grid point closes the interval
/// at that boundary.
std::vector<CountingProcessRow> to_counting_process(const PanelDataset& panel,
                                                    const std::vector<double>& time_grid);

}  // namespace orthoreg
