#pragma once

// In-memory form of an instance file.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"
#include "odist/social_choice.hpp"

namespace odist {

/// An alternative facility metric with a metric consistent with it, used by
/// lower-bound constructions that need a different l per case.
struct Scenario {
  std::string label;
  FacilityDistances facility_distances;
  std::optional<Matrix> true_metric;
  /// The outcome the scenario is built against, if any.
  std::optional<Assignment> assignment;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Instance {
  std::string name;
  /// Generator parameters, informational.
  std::map<std::string, double> parameters;
  FacilitySet facilities;
  std::optional<FacilityDistances> facility_distances;
  std::optional<CandidateRankings> candidate_rankings;
  PreferenceProfile preferences;
  ProblemSpec problem;
  std::optional<Matrix> true_metric;
  std::vector<Scenario> scenarios;

  std::size_t num_agents() const { return preferences.num_agents(); }
  std::size_t num_facilities() const { return facilities.size(); }

  /// Throws InputError when the instance has no numeric l.
  const FacilityDistances& distances() const;
  /// From the numeric l when present, otherwise from the candidate rankings.
  DistancePartialOrder partial_order() const;
  /// The true metric as a validated FullMetric (throws if absent).
  FullMetric full_metric() const;

  /// Cross-field checks: dimensions, consistency of the true metric, and
  /// that the problem builds.
  void validate() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

}  // namespace odist
