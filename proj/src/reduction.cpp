#include "odist/reduction.hpp"

#include <string>

namespace odist {

ProjectedProblem project_problem(const PreferenceProfile& profile, const FacilityDistances& l,
                                 const AssignmentProblem& problem) {
  if (profile.num_agents() != problem.num_agents() || profile.num_facilities() != problem.num_facilities()) {
    throw InputError("profile and problem disagree on the number of agents or facilities");
  }
  ProjectedAgents agents = project_agents(profile, l);
  Matrix distances = agents.cost_matrix();
  return {std::move(agents), problem, std::move(distances)};
}

namespace {

void require_preset(const ProblemSpec& spec, Preset expected, SolverKind solver) {
  if (spec.preset != expected) {
    throw InputError("solver " + std::string(to_string(solver)) + " only handles the " +
                     std::string(to_string(expected)) + " preset, instance uses " +
                     std::string(to_string(spec.preset)));
  }
  if (!spec.together.empty() || !spec.apart.empty() || !spec.penalties.empty() || !spec.capacities.empty()) {
    throw InputError("solver " + std::string(to_string(solver)) +
                     " ignores capacities, pair constraints and penalties; use brute_force");
  }
}

}  // namespace

ReductionResult reduce_and_solve(const ProblemSpec& spec, const PreferenceProfile& profile, const FacilityDistances& l,
                                 SolverKind solver, Strategy strategy, Execution exec) {
  const AssignmentProblem problem = build_problem(spec, profile.num_agents(), profile.num_facilities());
  const ProjectedProblem projected = project_problem(profile, l, problem);
  SolverResult r;
  switch (solver) {
    case SolverKind::BruteForce:
      r = brute_force_optimal(projected.problem, projected.distances, exec);
      break;
    case SolverKind::MinCostMatching:
      require_preset(spec, Preset::MatchingMinCost, solver);
      if (!spec.opening_costs.empty()) throw InputError("min_cost_matching ignores opening costs; use brute_force");
      r = min_cost_matching(projected.distances);
      break;
    case SolverKind::BottleneckMatching:
      require_preset(spec, Preset::MatchingEgalitarian, solver);
      if (!spec.opening_costs.empty()) throw InputError("bottleneck_matching ignores opening costs; use brute_force");
      r = bottleneck_matching(projected.distances);
      break;
    case SolverKind::KCenterGreedy:
      require_preset(spec, Preset::KCenter, solver);
      if (!spec.opening_costs.empty()) throw InputError("k_center_greedy ignores opening costs; use brute_force");
      r = k_center_greedy(projected.agents, *spec.k);
      break;
    case SolverKind::KMedian:
      require_preset(spec, Preset::KMedian, solver);
      if (!spec.opening_costs.empty()) throw InputError("k_median ignores opening costs; use brute_force");
      r = k_median_solver(projected.distances, *spec.k, strategy);
      break;
    case SolverKind::FacilityLocation:
      require_preset(spec, Preset::FacilityLocation, solver);
      r = facility_location_solver(projected.distances, spec.opening_costs, strategy);
      break;
  }
  if (!problem.is_valid(r.assignment)) {
    throw InternalError("solver " + std::string(to_string(solver)) + " returned an invalid assignment");
  }
  // Agent i's copy sits at top(i); x(i) = x~(i~) is the same vector.
  ReductionResult out;
  out.assignment = r.assignment;
  out.guarantee = 1.0 + 2.0 * r.beta;
  out.solver = std::move(r);
  return out;
}

}  // namespace odist
