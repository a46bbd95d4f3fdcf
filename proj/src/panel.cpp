#include "orthoreg/panel.hpp"

#include <cmath>
#include <unordered_set>

namespace orthoreg {

std::string outcome_kind_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::continuous: return "continuous";
    case OutcomeKind::count: return "count";
    case OutcomeKind::binary: return "binary";
    case OutcomeKind::survival: return "survival";
  }
  return "?";
}

OutcomeKind outcome_kind_from_string(const std::string& s) {
  if (s == "continuous") return OutcomeKind::continuous;
  if (s == "count") return OutcomeKind::count;
  if (s == "binary") return OutcomeKind::binary;
  if (s == "survival") return OutcomeKind::survival;
  throw DataError("unknown outcome kind '" + s + "'");
}

Outcome Outcome::continuous(double y) {
  if (!std::isfinite(y)) throw DataError("continuous outcome must be finite");
  Outcome o;
  o.kind_ = OutcomeKind::continuous;
  o.value_ = y;
  return o;
}

Outcome Outcome::count(double y) {
  if (!std::isfinite(y) || y < 0.0) throw DataError("count outcome must be a nonnegative real");
  Outcome o;
  o.kind_ = OutcomeKind::count;
  o.value_ = y;
  return o;
}

Outcome Outcome::binary(double y) {
  if (y != 0.0 && y != 1.0) throw DataError("binary outcome must be 0 or 1");
  Outcome o;
  o.kind_ = OutcomeKind::binary;
  o.value_ = y;
  return o;
}

Outcome Outcome::survival(double time, int event) {
  if (!(time > 0.0) || !std::isfinite(time)) throw DataError("survival time must be positive");
  if (event != 0 && event != 1) throw DataError("survival event must be 0 or 1");
  Outcome o;
  o.kind_ = OutcomeKind::survival;
  o.time_ = time;
  o.event_ = event;
  return o;
}

double Outcome::value() const {
  if (kind_ == OutcomeKind::survival) throw DataError("survival outcome has no scalar value");
  return value_;
}

double Outcome::time() const {
  if (kind_ != OutcomeKind::survival) throw DataError("outcome is not survival");
  return time_;
}

int Outcome::event() const {
  if (kind_ != OutcomeKind::survival) throw DataError("outcome is not survival");
  return event_;
}

PanelDataset PanelDataset::build(std::vector<SubjectRecord> subjects) {
  if (subjects.empty()) throw DataError("panel has no subjects");
  const Index n = static_cast<Index>(subjects.size());
  const Index T = static_cast<Index>(subjects[0].covariates.size());
  if (T < 1) throw DataError("panel must have at least one time point");
  const OutcomeKind kind = subjects[0].outcome.kind();

  PanelDataset p;
  p.kind_ = kind;
  p.dims_.resize(T);
  for (Index t = 0; t < T; ++t) p.dims_[t] = subjects[0].covariates[t].size();

  std::unordered_set<std::string> seen;
  for (const auto& s : subjects) {
    if (!seen.insert(s.id).second) throw DataError("duplicate subject id '" + s.id + "'");
    if (static_cast<Index>(s.covariates.size()) != T ||
        static_cast<Index>(s.treatments.size()) != T)
      throw DataError("subject '" + s.id + "' does not have " + std::to_string(T) +
                      " time points");
    if (s.outcome.kind() != kind)
      throw DataError("subject '" + s.id + "' has a different outcome kind");
    for (Index t = 0; t < T; ++t) {
      if (s.covariates[t].size() != p.dims_[t])
        throw DataError("subject '" + s.id + "' covariate dimension mismatch at time " +
                        std::to_string(t + 1));
      if (!s.covariates[t].allFinite())
        throw DataError("subject '" + s.id + "' has a non-finite covariate at time " +
                        std::to_string(t + 1));
      if (!std::isfinite(s.treatments[t]))
        throw DataError("subject '" + s.id + "' has a non-finite treatment at time " +
                        std::to_string(t + 1));
    }
  }

  p.ids_.reserve(n);
  p.covariates_.resize(T);
  for (Index t = 0; t < T; ++t) p.covariates_[t].resize(n, p.dims_[t]);
  p.treatments_.resize(n, T);
  if (kind == OutcomeKind::survival) {
    p.y_time_.resize(n);
    p.y_event_.resize(n);
  } else {
    p.y_.resize(n);
  }

  for (Index i = 0; i < n; ++i) {
    const auto& s = subjects[i];
    p.ids_.push_back(s.id);
    for (Index t = 0; t < T; ++t) {
      p.covariates_[t].row(i) = s.covariates[t].transpose();
      p.treatments_(i, t) = s.treatments[t];
    }
    if (kind == OutcomeKind::survival) {
      p.y_time_[i] = s.outcome.time();
      p.y_event_[i] = s.outcome.event();
    } else {
      p.y_[i] = s.outcome.value();
    }
  }
  return p;
}

Outcome PanelDataset::outcome(Index i) const {
  switch (kind_) {
    case OutcomeKind::continuous: return Outcome::continuous(y_[i]);
    case OutcomeKind::count: return Outcome::count(y_[i]);
    case OutcomeKind::binary: return Outcome::binary(y_[i]);
    case OutcomeKind::survival: return Outcome::survival(y_time_[i], y_event_[i]);
  }
  throw DataError("bad outcome kind");
}

SubjectRecord PanelDataset::subject(Index i) const {
  SubjectRecord s;
  s.id = ids_[i];
  s.covariates.resize(T());
  s.treatments.resize(T());
  for (Index t = 0; t < T(); ++t) {
    s.covariates[t] = covariates_[t].row(i).transpose();
    s.treatments[t] = treatments_(i, t);
  }
  s.outcome = outcome(i);
  return s;
}

PanelDataset PanelDataset::resample(const std::vector<Index>& indices) const {
  PanelDataset p;
  const Index m = static_cast<Index>(indices.size());
  if (m == 0) throw DataError("resample: empty index list");
  p.kind_ = kind_;
  p.dims_ = dims_;
  p.covariates_.resize(covariates_.size());
  for (std::size_t t = 0; t < covariates_.size(); ++t)
    p.covariates_[t].resize(m, dims_[t]);
  p.treatments_.resize(m, T());
  if (kind_ == OutcomeKind::survival) {
    p.y_time_.resize(m);
    p.y_event_.resize(m);
  } else {
    p.y_.resize(m);
  }
  p.ids_.reserve(m);
  for (Index j = 0; j < m; ++j) {
    Index i = indices[j];
    if (i < 0 || i >= n()) throw DataError("resample: index out of range");
    p.ids_.push_back(ids_[i] + "#" + std::to_string(j));
    for (std::size_t t = 0; t < covariates_.size(); ++t)
      p.covariates_[t].row(j) = covariates_[t].row(i);
    p.treatments_.row(j) = treatments_.row(i);
    if (kind_ == OutcomeKind::survival) {
      p.y_time_[j] = y_time_[i];
      p.y_event_[j] = y_event_[i];
    } else {
      p.y_[j] = y_[i];
    }
  }
  return p;
}

std::vector<CountingProcessRow> to_counting_process(const PanelDataset& panel,
                                                    const std::vector<double>& time_grid) {
  if (panel.outcome_kind() != OutcomeKind::survival)
    throw DataError("to_counting_process: panel outcome is not survival");
  const Index T = panel.T();
  if (static_cast<Index>(time_grid.size()) != T)
    throw DataError("to_counting_process: grid must have T entries");
  for (Index t = 1; t < T; ++t)
    if (!(time_grid[t] > time_grid[t - 1]))
      throw DataError("to_counting_process: grid must be strictly increasing");
  for (Index t = 1; t < T; ++t)
    if (panel.covariate_dims()[t] != panel.covariate_dims()[0])
      throw DataError("to_counting_process: covariate dimension varies with time; "
                      "use a fit-level design for such panels");

  std::vector<CountingProcessRow> rows;
  for (Index i = 0; i < panel.n(); ++i) {
    double y = panel.survival_times()[i];
    int event = panel.survival_events()[i];
    if (y <= time_grid[0]) {
      // Observation ends before the first interval opens; emit one truncated row.
      CountingProcessRow r;
      r.subject_id = panel.ids()[i];
      r.tstart = std::min(0.0, time_grid[0]);
      r.tstop = y;
      r.event = event;
      Index d = panel.covariate_dims()[0];
      r.covariates.resize(d + 1);
      r.covariates.head(d) = panel.covariates(1).row(i).transpose();
      r.covariates[d] = panel.treatment(i, 1);
      rows.push_back(std::move(r));
      continue;
    }
    for (Index t = 1; t <= T; ++t) {
      double start = time_grid[t - 1];
      if (start >= y) break;
      double stop = (t < T) ? std::min(time_grid[t], y) : y;
      CountingProcessRow r;
      r.subject_id = panel.ids()[i];
      r.tstart = start;
      r.tstop = stop;
      r.event = (stop == y) ? event : 0;
      Index d = panel.covariate_dims()[t - 1];
      r.covariates.resize(d + 1);
      r.covariates.head(d) = panel.covariates(t).row(i).transpose();
      r.covariates[d] = panel.treatment(i, t);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace orthoreg
