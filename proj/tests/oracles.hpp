#pragma once

// Slow reference implementations used only by the tests. None of them call
// the LP solver or the audit code.

#include <cstddef>
#include <optional>
#include <vector>

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"

namespace odist::oracle {

using Point = std::vector<double>;

/// Vertices of agent i's closed consistency polytope, found by solving every
/// m x m subsystem of tight rows. With `cap`, also d(i, cap->first) <= cap->second.
std::vector<Point> agent_vertices(const PreferenceProfile& profile, AgentIdx i, const FacilityDistances& l,
                                  std::optional<std::pair<FacilityIdx, double>> cap = std::nullopt);

/// Sum distortion of W: bisection on r over sum_i max_v (v_W - r v_X).
double sum_distortion(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l);

/// Same for an assignment under a sum distance cost plus facility costs,
/// alternatives drawn from all m^n maps filtered by is_valid.
double sum_assignment_distortion(const Assignment& x, const PreferenceProfile& profile,
                                 const FacilityDistances& l, const AssignmentProblem& problem);

/// Percentile distortion of W by enumerating which k agents realize the
/// alternative's order statistic. Practical for n <= 5, m <= 3.
double percentile_distortion(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l,
                             double alpha);

/// Optimal perfect matching value over all permutations.
double matching_sum_opt(const Matrix& cost);
double matching_bottleneck_opt(const Matrix& cost);

/// min over k-subsets S of max_i min_{F in S} dist(i, F).
double k_center_opt(const Matrix& dist, std::size_t k);

}  // namespace odist::oracle
