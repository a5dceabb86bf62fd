#pragma once

// Worst-case distortion over all metrics consistent with (profile, l).
// Additive and max objectives are audited exactly by linear programs; the
// percentile objective exactly by a per-agent decomposition, or from below
// by sampling.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"
#include "odist/parallel.hpp"

namespace odist {

enum class AuditObjective { Sum, Max, Percentile };
std::string_view to_string(AuditObjective o);

struct AlternativeValue {
  /// Set for single-winner audits.
  std::optional<FacilityIdx> facility;
  /// Set for assignment audits.
  Assignment assignment;
  /// sup of cost(outcome) / cost(alternative); +inf when unbounded.
  double value = 1.0;
};

struct AuditReport {
  AuditObjective objective = AuditObjective::Sum;
  double alpha = 0.5;  // percentile only
  /// +inf when unbounded. A lower bound when !exact.
  double distortion = 1.0;
  bool exact = true;
  /// n x m agent-facility distances; absent when the distortion is infinite.
  std::optional<Matrix> witness;
  /// The objective ratio recomputed on the witness.
  double witness_ratio = 1.0;
  /// Witness puts some agent at equal distance from two facilities it ranks
  /// strictly; such a witness lies on the closure of the consistent set.
  bool witness_has_ties = false;
  std::vector<AlternativeValue> breakdown;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
};

/// Distortion of facility W for the sum objective.
AuditReport audit_sum_social_choice(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l,
                                    Execution exec = Execution::Parallel);

/// Distortion of assignment x under the problem's cost (sum or max distance
/// cost plus facility costs). Enumerates every valid alternative; throws
/// SearchSpaceTooLarge beyond kMaxAuditAlternatives.
AuditReport audit_additive_assignment(const Assignment& x, const PreferenceProfile& profile,
                                      const FacilityDistances& l, const AssignmentProblem& problem,
                                      Execution exec = Execution::Parallel);

/// Exact distortion of W for the alpha-percentile objective. Throws
/// InputError for alpha < 1/2, where the distortion is unbounded.
AuditReport audit_percentile_social_choice(FacilityIdx w, const PreferenceProfile& profile,
                                           const FacilityDistances& l, double alpha,
                                           Execution exec = Execution::Parallel);

/// Best ratio over `samples` sampled consistent metrics: a lower bound.
AuditReport sample_percentile_social_choice(FacilityIdx w, const PreferenceProfile& profile,
                                            const FacilityDistances& l, double alpha, std::size_t samples,
                                            std::uint64_t seed);

/// A point of the closed consistent set: each agent's row maximizes a random
/// linear objective over its polytope intersected with a random box, and is
/// sometimes averaged with a second such vertex.
FullMetric sample_consistent_metric(const PreferenceProfile& profile, const FacilityDistances& l,
                                    std::uint64_t seed);
FullMetric sample_consistent_metric(const PreferenceProfile& profile, const FacilityDistances& l,
                                    std::mt19937_64& rng);

/// cost(W) / min_X cost(X) on a concrete metric; 0/0 counts as 1.
double social_choice_ratio(FacilityIdx w, const FullMetric& d, AuditObjective objective, double alpha = 0.5);
/// c(x, d) / min over valid x' of c(x', d), by exhaustive search.
double assignment_ratio(const Assignment& x, const FullMetric& d, const AssignmentProblem& problem);

bool has_preference_ties(const PreferenceProfile& profile, const Matrix& d, double tol = kMetricTolerance);

}  // namespace odist
