#pragma once

// Single-winner mechanisms: the projected-agent sum rule, the augmented
// majority-graph rule for median/percentile objectives, and a Copeland
// baseline. Objective evaluators live here too.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "odist/core_model.hpp"

namespace odist {

/// Pairwise comparison counts and the defeat-or-tie graph.
class MajorityGraph {
 public:
  std::size_t size() const { return m_; }
  std::size_t num_agents() const { return n_; }
  /// Number of agents strictly preferring a to b.
  std::size_t support(FacilityIdx a, FacilityIdx b) const { return counts_[a * m_ + b]; }
  /// Edge (a, b): a pairwise defeats or ties b (support >= n/2).
  bool has_edge(FacilityIdx a, FacilityIdx b) const { return a != b && 2 * support(a, b) >= n_; }
  /// Strict defeat (support > n/2).
  bool defeats(FacilityIdx a, FacilityIdx b) const { return a != b && 2 * support(a, b) > n_; }
  /// A facility strictly defeating every other one, if any.
  std::optional<FacilityIdx> condorcet_winner() const;
  std::vector<std::pair<FacilityIdx, FacilityIdx>> edges() const;

 private:
  friend MajorityGraph majority_graph(const PreferenceProfile&);
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<std::size_t> counts_;
};

/// Throws InputError for top-only profiles.
MajorityGraph majority_graph(const PreferenceProfile& profile);

/// Each facility's ranking of the other facilities, nearest first.
using CandidateRankings = std::vector<std::vector<FacilityIdx>>;

/// Known "<=" facts between facility-pair distances, closed under
/// transitivity. Pairs on a common cycle form one equality class.
class DistancePartialOrder {
 public:
  /// Total order by value.
  static DistancePartialOrder from_distances(const FacilityDistances& l);
  /// Facts only between pairs sharing a facility. Throws InputError unless
  /// each ranking orders exactly the other m-1 facilities.
  static DistancePartialOrder from_rankings(const CandidateRankings& rankings);

  std::size_t num_facilities() const { return m_; }
  std::size_t num_pairs() const { return m_ * (m_ - 1) / 2; }
  std::size_t pair_index(FacilityIdx a, FacilityIdx b) const;

  /// d(a,b) known to be <= d(c,d).
  bool leq(FacilityIdx a, FacilityIdx b, FacilityIdx c, FacilityIdx d) const {
    return reach_[pair_index(a, b) * num_pairs() + pair_index(c, d)];
  }
  bool comparable(FacilityIdx a, FacilityIdx b, FacilityIdx c, FacilityIdx d) const {
    return leq(a, b, c, d) || leq(c, d, a, b);
  }
  std::size_t equality_class(FacilityIdx a, FacilityIdx b) const { return class_of_[pair_index(a, b)]; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  void close();
  std::size_t m_ = 0;
  std::vector<char> reach_;
  std::vector<std::size_t> class_of_;
  std::size_t num_classes_ = 0;
};

struct EdgeJustification {
  enum class Kind { Majority, Witness };
  FacilityIdx beaten;
  Kind kind;
  /// For Witness: P with d(beaten, winner) <= d(beaten, P) and P defeating
  /// or tying `beaten`.
  std::optional<FacilityIdx> witness;
};

struct SocialChoiceOutcome {
  FacilityIdx winner = 0;
  /// Objective value per facility used to pick the winner (sum rule only).
  std::vector<double> scores;
  /// One entry per other facility (augmented majority rule only).
  std::vector<EdgeJustification> certificate;
  bool condorcet = false;
};

/// argmin over X of sum_i l(top(i), X), lowest index on ties.
SocialChoiceOutcome sum_winner(const ProjectedAgents& agents);

/// Majority graph plus the edges (W, Y) justified by a witness P. Each
/// unordered pair is visited once, in `pair_order` when given.
struct AugmentedGraph {
  std::size_t m = 0;
  std::vector<char> edge;                     // m*m adjacency
  std::vector<std::optional<FacilityIdx>> witness;  // m*m, set for added edges
  bool has_edge(FacilityIdx a, FacilityIdx b) const { return edge[a * m + b] != 0; }
};
AugmentedGraph augment_majority_graph(const MajorityGraph& graph, const DistancePartialOrder& order,
                                      std::span<const std::pair<FacilityIdx, FacilityIdx>> pair_order = {});

/// Condorcet winner if one exists; otherwise the lowest-index facility with
/// edges to all others in the augmented graph. Throws InternalError if none
/// exists.
SocialChoiceOutcome median_winner(const PreferenceProfile& profile, const DistancePartialOrder& order);

/// Most pairwise defeats, ties worth one half, lowest index on ties.
SocialChoiceOutcome copeland_winner(const PreferenceProfile& profile);

double evaluate_sum_cost(FacilityIdx x, const FullMetric& d);

/// Order-statistic index k (1-based) = min(floor(alpha*n) + 1, n).
std::size_t percentile_rank(std::size_t n, double alpha);
/// k-th smallest value for k = percentile_rank(values.size(), alpha).
double percentile_value(std::span<const double> values, double alpha);
/// Throws InputError if alpha is outside [0, 1].
double evaluate_percentile_cost(FacilityIdx x, const FullMetric& d, double alpha);

}  // namespace odist
