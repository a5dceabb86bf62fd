#pragma once

// Omniscient solvers for problems whose agent-facility distances are fully
// known (in particular the projected problems). Each reports its
// approximation factor beta.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"
#include "odist/parallel.hpp"

namespace odist {

struct SolverResult {
  Assignment assignment;
  double beta = 1.0;
  bool exact = true;  // exact implies beta == 1
};

enum class SolverKind {
  BruteForce,
  MinCostMatching,
  BottleneckMatching,
  KCenterGreedy,
  KMedian,
  FacilityLocation,
};

std::string_view to_string(SolverKind s);
/// Throws InputError for unknown names.
SolverKind parse_solver(std::string_view name);

/// Auto picks the exact path when it fits the enumeration thresholds.
enum class Strategy { Auto, Exact, Heuristic };

/// Largest C(m,k) the exact k-median path enumerates.
inline constexpr std::uint64_t kMaxKMedianSubsets = 100'000;
/// Largest m the exact facility-location path enumerates (2^m - 1 sets).
inline constexpr std::size_t kMaxExactFacilityLocation = 16;
/// Local-search bound for single-swap k-median.
inline constexpr double kKMedianLocalSearchBeta = 5.0;
/// Dual-fitting bound of the star greedy for facility location.
inline constexpr double kFacilityLocationGreedyBeta = 1.861;

/// Exhaustive search; lexicographically first optimum. Throws
/// SearchSpaceTooLarge beyond kMaxSearchSpace.
SolverResult brute_force_optimal(const AssignmentProblem& p, const Matrix& dist,
                                 Execution exec = Execution::Parallel);

/// Hungarian algorithm, O(n^3). Throws InputError for a non-square matrix.
SolverResult min_cost_matching(const Matrix& cost);

/// Perfect matching minimizing the largest edge: binary search over the
/// sorted distinct entries with a Kuhn feasibility check at each threshold.
SolverResult bottleneck_matching(const Matrix& cost);

/// Farthest-point greedy over the facilities hosting projected agents. The
/// first center is the lowest-index host; each agent goes to its nearest
/// center (lowest index on ties).
SolverResult k_center_greedy(const ProjectedAgents& agents, std::size_t k);

/// `dist` is n x m. Exact k-subset enumeration, or greedy seeding followed by
/// single-swap local search.
SolverResult k_median_solver(const Matrix& dist, std::size_t k, Strategy strategy = Strategy::Auto);

/// `dist` is n x m; `opening_costs` has m entries. Exact open-set
/// enumeration, or the star greedy with switching credits.
SolverResult facility_location_solver(const Matrix& dist, std::span<const double> opening_costs,
                                      Strategy strategy = Strategy::Auto);

/// Sum of distances when each agent uses its nearest facility in `open`
/// (lowest index on ties); fills `x` if given.
double connect_to_nearest(const Matrix& dist, std::span<const FacilityIdx> open, Assignment* x = nullptr);

}  // namespace odist
