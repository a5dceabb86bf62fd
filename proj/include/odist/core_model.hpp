#pragma once

// Agents, facilities, facility metrics, preference profiles and the set of
// agent-facility metrics consistent with them.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace odist {

using FacilityIdx = std::size_t;
using AgentIdx = std::size_t;

/// Absolute tolerance for metric checks, scaled by max(1, largest entry).
inline constexpr double kMetricTolerance = 1e-9;

/// Malformed or contradictory input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A guarantee the code relies on did not hold; indicates a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double max_abs() const;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class FacilitySet {
 public:
  FacilitySet() = default;
  /// Throws InputError on duplicate or empty names, or an empty list.
  explicit FacilitySet(std::vector<std::string> names);
  /// F1..Fm.
  static FacilitySet numbered(std::size_t m);

  std::size_t size() const { return names_.size(); }
  const std::string& name(FacilityIdx f) const { return names_.at(f); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<FacilityIdx> find(std::string_view name) const;
  /// Like find(), but throws InputError naming the unknown facility.
  FacilityIdx index_of(std::string_view name) const;

  friend bool operator==(const FacilitySet&, const FacilitySet&) = default;

 private:
  std::vector<std::string> names_;
};

struct MetricViolation {
  enum class Kind { NonFinite, Negative, NonzeroDiagonal, Asymmetric, Triangle };
  Kind kind;
  FacilityIdx a = 0;
  FacilityIdx b = 0;
  FacilityIdx c = 0;  // only meaningful for Triangle: l(a,c) > l(a,b) + l(b,c)
  std::string message;
};

/// Checks symmetry, zero diagonal, nonnegativity and the triangle
/// inequality. Returns the first violation found. Throws InputError if the
/// matrix is not square.
std::optional<MetricViolation> validate_facility_distances(const Matrix& l,
                                                           double tol = kMetricTolerance);

/// The known metric l on facilities.
class FacilityDistances {
 public:
  FacilityDistances() = default;
  /// Throws InputError if `l` is not a valid metric.
  explicit FacilityDistances(Matrix l);

  std::size_t size() const { return l_.rows(); }
  double operator()(FacilityIdx a, FacilityIdx b) const { return l_(a, b); }
  const Matrix& matrix() const { return l_; }
  double max_distance() const { return l_.max_abs(); }
  FacilityDistances scaled(double factor) const;

  friend bool operator==(const FacilityDistances&, const FacilityDistances&) = default;

 private:
  Matrix l_;
};

/// Each agent's ranking of the facilities, best first. In top-only mode each
/// ranking holds just the agent's first choice.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;

  /// Throws InputError unless every ranking is a permutation of 0..m-1.
  static PreferenceProfile full(std::size_t m, std::vector<std::vector<FacilityIdx>> rankings);
  static PreferenceProfile top_only(std::size_t m, std::vector<FacilityIdx> tops);

  std::size_t num_agents() const { return rankings_.size(); }
  std::size_t num_facilities() const { return m_; }
  bool is_top_only() const { return top_only_; }

  std::span<const FacilityIdx> ranking(AgentIdx i) const { return rankings_.at(i); }
  FacilityIdx top(AgentIdx i) const { return rankings_.at(i).front(); }
  /// Position of f in agent i's ranking (0 = top). Full profiles only.
  std::size_t rank_of(AgentIdx i, FacilityIdx f) const { return positions_[i * m_ + f]; }
  /// Strict preference a over b. Full profiles only.
  bool prefers(AgentIdx i, FacilityIdx a, FacilityIdx b) const { return rank_of(i, a) < rank_of(i, b); }

  const std::vector<std::vector<FacilityIdx>>& rankings() const { return rankings_; }

  friend bool operator==(const PreferenceProfile& x, const PreferenceProfile& y) {
    return x.m_ == y.m_ && x.top_only_ == y.top_only_ && x.rankings_ == y.rankings_;
  }

 private:
  std::size_t m_ = 0;
  bool top_only_ = false;
  std::vector<std::vector<FacilityIdx>> rankings_;
  std::vector<std::size_t> positions_;
};

/// Returns a description of the first violated condition, if any: entries
/// must be finite and nonnegative and every agent row must satisfy
/// |d(i,F) - d(i,F')| <= l(F,F') <= d(i,F) + d(i,F').
std::optional<std::string> validate_full_metric(const Matrix& agent_facility, const FacilityDistances& l,
                                                double tol = kMetricTolerance);

/// Agent-facility distances d(i,F) together with the facility metric they
/// extend. Agent-agent distances follow by shortest-path completion and are
/// never stored.
class FullMetric {
 public:
  FullMetric() = default;
  /// Throws InputError when validate_full_metric reports a problem.
  FullMetric(Matrix agent_facility, FacilityDistances l, double tol = kMetricTolerance);

  std::size_t num_agents() const { return d_.rows(); }
  std::size_t num_facilities() const { return d_.cols(); }
  double operator()(AgentIdx i, FacilityIdx f) const { return d_(i, f); }
  const Matrix& agent_facility() const { return d_; }
  const FacilityDistances& facility_distances() const { return l_; }

 private:
  Matrix d_;
  FacilityDistances l_;
};

/// Sorts each agent's facilities by distance, ties broken by facility index.
PreferenceProfile preferences_from_metric(const FullMetric& d);

/// True iff the distances along each agent's ranking never decrease
/// (within `tol`). Top-only profiles only constrain the first choice.
bool check_consistency(const PreferenceProfile& profile, const FullMetric& d, double tol = kMetricTolerance);

/// Each agent copied onto its top-choice facility, so its distances are l.
class ProjectedAgents {
 public:
  ProjectedAgents(std::vector<FacilityIdx> tops, FacilityDistances l);

  std::size_t num_agents() const { return tops_.size(); }
  std::size_t num_facilities() const { return l_.size(); }
  FacilityIdx top(AgentIdx i) const { return tops_[i]; }
  const std::vector<FacilityIdx>& tops() const { return tops_; }
  double distance(AgentIdx i, FacilityIdx f) const { return l_(tops_[i], f); }
  const FacilityDistances& facility_distances() const { return l_; }
  /// n x m matrix of projected distances.
  Matrix cost_matrix() const;

 private:
  std::vector<FacilityIdx> tops_;
  FacilityDistances l_;
};

ProjectedAgents project_agents(const PreferenceProfile& profile, const FacilityDistances& l);

/// d(agent, closer) <= d(agent, farther)
struct ChainConstraint {
  AgentIdx agent;
  FacilityIdx closer;
  FacilityIdx farther;
};

/// For one agent and facility pair (a, b) with distance l(a,b):
/// DifferenceAtMost: |d(i,a) - d(i,b)| <= l(a,b)
/// SumAtLeast:       d(i,a) + d(i,b) >= l(a,b)
struct PairConstraint {
  enum class Kind { DifferenceAtMost, SumAtLeast };
  Kind kind;
  AgentIdx agent;
  FacilityIdx a;
  FacilityIdx b;
  double distance;
};

/// Linear description of the closure of the consistent metrics over the
/// n*m variables d(i,F) >= 0. Variable index of d(i,F) is i*m + F.
class ConsistencyConstraintSet {
 public:
  std::size_t num_agents() const { return n_; }
  std::size_t num_facilities() const { return m_; }
  std::size_t num_variables() const { return n_ * m_; }
  std::size_t variable(AgentIdx i, FacilityIdx f) const { return i * m_ + f; }

  const std::vector<ChainConstraint>& chains() const { return chains_; }
  const std::vector<PairConstraint>& pairs() const { return pairs_; }
  /// Rows of one agent only.
  std::span<const ChainConstraint> chains_of(AgentIdx i) const {
    return std::span(chains_).subspan(chain_start_[i], chain_start_[i + 1] - chain_start_[i]);
  }
  std::span<const PairConstraint> pairs_of(AgentIdx i) const {
    return std::span(pairs_).subspan(pair_start_[i], pair_start_[i + 1] - pair_start_[i]);
  }

  bool satisfied_by(const Matrix& agent_facility, double tol = kMetricTolerance) const;

 private:
  friend ConsistencyConstraintSet consistency_constraints(const PreferenceProfile&, const FacilityDistances&);
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<ChainConstraint> chains_;
  std::vector<PairConstraint> pairs_;
  std::vector<std::size_t> chain_start_{0};
  std::vector<std::size_t> pair_start_{0};
};

/// Consecutive-rank chain constraints plus the two pair constraints per
/// agent and unordered facility pair.
ConsistencyConstraintSet consistency_constraints(const PreferenceProfile& profile, const FacilityDistances& l);

}  // namespace odist
