#pragma once

// Projection of an assignment problem onto top-choice agents and the
// black-box reduction that solves the projected problem.

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"
#include "odist/solvers.hpp"

namespace odist {

struct ProjectedProblem {
  ProjectedAgents agents;
  /// Same constraints and cost spec as the original problem.
  AssignmentProblem problem;
  /// n x m, entry (i, F) = l(top(i), F).
  Matrix distances;
};

ProjectedProblem project_problem(const PreferenceProfile& profile, const FacilityDistances& l,
                                 const AssignmentProblem& problem);

struct ReductionResult {
  Assignment assignment;
  SolverResult solver;
  /// 1 + 2*beta.
  double guarantee = 3.0;
};

/// Solves the projected problem and maps each agent to its copy's facility.
/// Throws InputError if `solver` does not fit the preset, or if the preset
/// carries constraints or costs a specialized solver ignores.
ReductionResult reduce_and_solve(const ProblemSpec& spec, const PreferenceProfile& profile, const FacilityDistances& l,
                                 SolverKind solver, Strategy strategy = Strategy::Auto,
                                 Execution exec = Execution::Parallel);

}  // namespace odist
