#pragma once

// Facility assignment problems: constraints on the map agents -> facilities,
// a monotone subadditive distance cost, and a metric-independent facility
// cost. Includes the projection onto top-choice agents.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odist/core_model.hpp"
#include "odist/parallel.hpp"

namespace odist {

using Assignment = std::vector<FacilityIdx>;

/// Requested a cost functional outside {sum, max}, e.g. the median.
class UnsupportedCost : public InputError {
 public:
  using InputError::InputError;
};

/// Exhaustive search would exceed its candidate budget.
class SearchSpaceTooLarge : public InputError {
 public:
  using InputError::InputError;
};

enum class DistanceCost { Sum, Max };

/// Throws UnsupportedCost for anything but "sum" / "max".
DistanceCost parse_distance_cost(std::string_view name);
std::string_view to_string(DistanceCost c);

struct CoassignPenalty {
  AgentIdx a;
  AgentIdx b;
  double penalty;  // charged when a and b share a facility
};

struct CostSpec {
  DistanceCost distance_cost = DistanceCost::Sum;
  /// Charged once per facility with at least one agent; empty means zero.
  std::vector<double> opening_costs;
  std::vector<CoassignPenalty> penalties;
};

/// c_d applied to a distance vector.
double distance_cost(DistanceCost c, std::span<const double> s);
/// c_f(x); depends only on the assignment.
double facility_cost(const Assignment& x, const CostSpec& spec);

struct ConstraintSet {
  /// Maximum agents per facility; empty means uncapacitated.
  std::vector<std::size_t> capacities;
  std::size_t min_open = 0;
  std::optional<std::size_t> max_open;
  std::vector<std::pair<AgentIdx, AgentIdx>> together;
  std::vector<std::pair<AgentIdx, AgentIdx>> apart;
};

bool is_valid(const Assignment& x, const ConstraintSet& c, std::size_t num_facilities);

/// Default limit on m^n for exhaustive searches.
inline constexpr std::uint64_t kMaxSearchSpace = 1'000'000;
/// Default limit on the number of alternatives an audit enumerates.
inline constexpr std::uint64_t kMaxAuditAlternatives = 10'000;

class AssignmentProblem {
 public:
  /// Throws InputError on malformed constraints or costs, and when an
  /// exhaustive search (only attempted when m^n <= kMaxSearchSpace) finds no
  /// valid assignment.
  AssignmentProblem(std::size_t num_agents, std::size_t num_facilities, ConstraintSet constraints, CostSpec cost);

  std::size_t num_agents() const { return n_; }
  std::size_t num_facilities() const { return m_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const CostSpec& cost() const { return cost_; }

  bool is_valid(const Assignment& x) const { return odist::is_valid(x, constraints_, m_); }
  /// m^n, saturating at UINT64_MAX.
  std::uint64_t search_space() const;

 private:
  std::size_t n_;
  std::size_t m_;
  ConstraintSet constraints_;
  CostSpec cost_;
};

/// s_i = dist(i, x(i)) for any n x m agent-facility distance matrix.
std::vector<double> distance_vector(const Assignment& x, const Matrix& dist);
/// c(x, d) = c_d(s(x, d)) + c_f(x).
double total_cost(const Assignment& x, const Matrix& dist, const CostSpec& spec);
double total_cost(const Assignment& x, const FullMetric& d, const CostSpec& spec);

/// Calls `visit` on every valid assignment in lexicographic order.
/// Partial assignments violating capacities, open-count bounds or pair
/// constraints are pruned.
void for_each_valid_assignment(const AssignmentProblem& p, const std::function<void(const Assignment&)>& visit);
std::vector<Assignment> valid_assignments(const AssignmentProblem& p, std::uint64_t limit);

struct SearchResult {
  Assignment assignment;
  double cost = 0.0;
};

/// Globally minimal valid assignment under `dist`; the lexicographically
/// first on exact ties. Throws SearchSpaceTooLarge if m^n exceeds `limit`.
/// The parallel path splits on the first agents' choices and merges in
/// lexicographic order, so both paths return the same assignment.
SearchResult minimize_assignment(const AssignmentProblem& p, const Matrix& dist,
                                 Execution exec = Execution::Parallel, std::uint64_t limit = kMaxSearchSpace);

enum class Preset {
  SocialChoiceSum,
  SocialChoiceMedian,
  MatchingMinCost,
  MatchingEgalitarian,
  KCenter,
  KMedian,
  FacilityLocation,
};

std::string_view to_string(Preset p);
/// Throws InputError for unknown names.
Preset parse_preset(std::string_view name);
std::vector<Preset> all_presets();
bool is_social_choice(Preset p);

/// Instance-level description of the problem: a preset plus optional
/// extra constraints and costs.
struct ProblemSpec {
  Preset preset = Preset::SocialChoiceSum;
  std::optional<std::size_t> k;
  std::vector<std::size_t> capacities;
  std::vector<double> opening_costs;
  std::vector<std::pair<AgentIdx, AgentIdx>> together;
  std::vector<std::pair<AgentIdx, AgentIdx>> apart;
  std::vector<CoassignPenalty> penalties;

  friend bool operator==(const ProblemSpec& a, const ProblemSpec& b);
};

/// Builds the assignment problem for a preset. Throws UnsupportedCost for
/// SocialChoiceMedian (the median is not subadditive) and InputError when
/// the preset's parameters do not fit n and m.
AssignmentProblem build_problem(const ProblemSpec& spec, std::size_t num_agents, std::size_t num_facilities);

}  // namespace odist
