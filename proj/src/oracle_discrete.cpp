#include <cmath>
#include <fstream>

#include <json.hpp>

#include "orthoreg/oracle.hpp"

namespace orthoreg {

namespace {

// Mixed-radix index, first digit slowest.
Index pack(const std::vector<Index>& digits, const std::vector<Index>& radices) {
  Index ix = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) ix = ix * radices[k] + digits[k];
  return ix;
}

constexpr Index kMaxStates = 1 << 16;

}  // namespace

DiscreteScm::DiscreteScm(std::vector<std::vector<double>> x_support,
                         std::vector<std::vector<double>> a_support, std::vector<Matrix> p_x,
                         std::vector<Matrix> p_a, Vector mu)
    : x_support_(std::move(x_support)),
      a_support_(std::move(a_support)),
      p_x_(std::move(p_x)),
      p_a_(std::move(p_a)),
      mu_(std::move(mu)) {
  validate();
}

void DiscreteScm::validate() const {
  const Index T = this->T();
  if (T < 1 || static_cast<Index>(a_support_.size()) != T ||
      static_cast<Index>(p_x_.size()) != T || static_cast<Index>(p_a_.size()) != T)
    throw DataError("DiscreteScm: inconsistent table count");
  Index hist_rows = 1;
  Index total_states = 1;
  for (Index t = 1; t <= T; ++t) {
    const Index kx = static_cast<Index>(x_support_[t - 1].size());
    const Index ka = static_cast<Index>(a_support_[t - 1].size());
    if (kx < 1 || ka < 1) throw DataError("DiscreteScm: empty support");
    if (p_x_[t - 1].rows() != hist_rows || p_x_[t - 1].cols() != kx)
      throw DataError("DiscreteScm: p_x table shape mismatch at t=" + std::to_string(t));
    if (p_a_[t - 1].rows() != hist_rows * kx || p_a_[t - 1].cols() != ka)
      throw DataError("DiscreteScm: p_a table shape mismatch at t=" + std::to_string(t));
    hist_rows *= kx * ka;
    total_states *= kx * ka;
    if (total_states > kMaxStates)
      throw DataError("DiscreteScm: state space too large for exact summation");
  }
  if (mu_.size() != total_states) throw DataError("DiscreteScm: mu table size mismatch");
  for (Index t = 1; t <= T; ++t) {
    for (Index r = 0; r < p_x_[t - 1].rows(); ++r) {
      if ((p_x_[t - 1].row(r).array() < 0.0).any() ||
          std::abs(p_x_[t - 1].row(r).sum() - 1.0) > 1e-12)
        throw DataError("DiscreteScm: p_x row " + std::to_string(r) + " at t=" +
                        std::to_string(t) + " is not a probability distribution");
    }
    for (Index r = 0; r < p_a_[t - 1].rows(); ++r) {
      if ((p_a_[t - 1].row(r).array() < 0.0).any() ||
          std::abs(p_a_[t - 1].row(r).sum() - 1.0) > 1e-12)
        throw DataError("DiscreteScm: p_a row " + std::to_string(r) + " at t=" +
                        std::to_string(t) + " is not a probability distribution");
    }
  }
}

double DiscreteScm::mu_at(const std::vector<Index>& x_idx, const std::vector<Index>& a_idx) const {
  std::vector<Index> digits, radices;
  for (Index t = 1; t <= T(); ++t) {
    digits.push_back(x_idx[t - 1]);
    radices.push_back(static_cast<Index>(x_support_[t - 1].size()));
    digits.push_back(a_idx[t - 1]);
    radices.push_back(static_cast<Index>(a_support_[t - 1].size()));
  }
  return mu_[pack(digits, radices)];
}

double DiscreteScm::p_x_at(Index t, const std::vector<Index>& x_hist,
                           const std::vector<Index>& a_hist, Index x_idx) const {
  std::vector<Index> digits, radices;
  for (Index s = 1; s < t; ++s) {
    digits.push_back(x_hist[s - 1]);
    radices.push_back(static_cast<Index>(x_support_[s - 1].size()));
    digits.push_back(a_hist[s - 1]);
    radices.push_back(static_cast<Index>(a_support_[s - 1].size()));
  }
  return p_x_[t - 1](pack(digits, radices), x_idx);
}

double DiscreteScm::p_a_at(Index t, const std::vector<Index>& x_hist,
                           const std::vector<Index>& a_hist, Index a_idx) const {
  std::vector<Index> digits, radices;
  for (Index s = 1; s < t; ++s) {
    digits.push_back(x_hist[s - 1]);
    radices.push_back(static_cast<Index>(x_support_[s - 1].size()));
    digits.push_back(a_hist[s - 1]);
    radices.push_back(static_cast<Index>(a_support_[s - 1].size()));
  }
  digits.push_back(x_hist[t - 1]);
  radices.push_back(static_cast<Index>(x_support_[t - 1].size()));
  return p_a_[t - 1](pack(digits, radices), a_idx);
}

double DiscreteScm::conditional_mean_x(Index t, const std::vector<Index>& x_hist,
                                       const std::vector<Index>& a_hist) const {
  double m = 0.0;
  for (Index k = 0; k < static_cast<Index>(x_support_[t - 1].size()); ++k)
    m += x_support_[t - 1][k] * p_x_at(t, x_hist, a_hist, k);
  return m;
}

Index DiscreteScm::a_index(Index t, double value) const {
  const auto& sup = a_support_[t - 1];
  for (std::size_t k = 0; k < sup.size(); ++k)
    if (std::abs(sup[k] - value) <= 1e-9) return static_cast<Index>(k);
  throw DataError("treatment value " + std::to_string(value) + " outside the support at t=" +
                  std::to_string(t));
}

namespace {

// Visits all (x_idx, a_idx) configurations of the SCM.
template <typename F>
void for_each_state(const DiscreteScm& scm, F&& visit) {
  const Index T = scm.T();
  std::vector<Index> x_idx(T, 0), a_idx(T, 0);
  std::function<void(Index)> rec = [&](Index t) {
    if (t > T) {
      visit(x_idx, a_idx);
      return;
    }
    for (Index xk = 0; xk < static_cast<Index>(scm.x_support(t).size()); ++xk) {
      x_idx[t - 1] = xk;
      for (Index ak = 0; ak < static_cast<Index>(scm.a_support(t).size()); ++ak) {
        a_idx[t - 1] = ak;
        rec(t + 1);
      }
    }
  };
  rec(1);
}

}  // namespace

double gformula_discrete(const DiscreteScm& scm, const std::vector<double>& abar) {
  const Index T = scm.T();
  if (static_cast<Index>(abar.size()) != T)
    throw DataError("gformula_discrete: abar must have T entries");
  std::vector<Index> a_idx(T);
  for (Index t = 1; t <= T; ++t) a_idx[t - 1] = scm.a_index(t, abar[t - 1]);

  double psi = 0.0;
  std::vector<Index> x_idx(T, 0);
  std::function<void(Index, double)> rec = [&](Index t, double prob) {
    if (prob == 0.0) return;
    if (t > T) {
      psi += prob * scm.mu_at(x_idx, a_idx);
      return;
    }
    for (Index xk = 0; xk < static_cast<Index>(scm.x_support(t).size()); ++xk) {
      x_idx[t - 1] = xk;
      rec(t + 1, prob * scm.p_x_at(t, x_idx, a_idx, xk));
    }
  };
  rec(1, 1.0);
  return psi;
}

std::pair<PanelDataset, Weights> DiscreteScm::population_panel() const {
  const Index T = this->T();
  std::vector<SubjectRecord> subjects;
  std::vector<double> probs;
  bool nonneg_mu = (mu_.array() >= 0.0).all();
  for_each_state(*this, [&](const std::vector<Index>& x_idx, const std::vector<Index>& a_idx) {
    double p = 1.0;
    for (Index t = 1; t <= T; ++t) {
      p *= p_x_at(t, x_idx, a_idx, x_idx[t - 1]);
      p *= p_a_at(t, x_idx, a_idx, a_idx[t - 1]);
      if (p == 0.0) return;
    }
    SubjectRecord s;
    s.id = "atom" + std::to_string(subjects.size() + 1);
    s.covariates.resize(T);
    s.treatments.resize(T);
    for (Index t = 1; t <= T; ++t) {
      s.covariates[t - 1] = Vector::Constant(1, x_support_[t - 1][x_idx[t - 1]]);
      s.treatments[t - 1] = a_support_[t - 1][a_idx[t - 1]];
    }
    double m = mu_at(x_idx, a_idx);
    s.outcome = nonneg_mu ? Outcome::count(m) : Outcome::continuous(m);
    subjects.push_back(std::move(s));
    probs.push_back(p);
  });
  Vector w = Eigen::Map<Vector>(probs.data(), static_cast<Index>(probs.size()));
  return {PanelDataset::build(std::move(subjects)), Weights(w)};
}

DiscreteScm DiscreteScm::from_json_file(const std::string& path) {
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
  auto xs = j.at("x_support").get<std::vector<std::vector<double>>>();
  auto as = j.at("a_support").get<std::vector<std::vector<double>>>();
  auto to_matrix = [](const nlohmann::json& rows) {
    auto v = rows.get<std::vector<std::vector<double>>>();
    Matrix m(static_cast<Index>(v.size()), v.empty() ? 0 : static_cast<Index>(v[0].size()));
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < v[r].size(); ++c)
        m(static_cast<Index>(r), static_cast<Index>(c)) = v[r][c];
    return m;
  };
  std::vector<Matrix> px, pa;
  for (const auto& t : j.at("p_x")) px.push_back(to_matrix(t));
  for (const auto& t : j.at("p_a")) pa.push_back(to_matrix(t));
  auto muv = j.at("mu").get<std::vector<double>>();
  Vector mu = Eigen::Map<Vector>(muv.data(), static_cast<Index>(muv.size()));
  return DiscreteScm(std::move(xs), std::move(as), std::move(px), std::move(pa), std::move(mu));
}

}  // namespace orthoreg
