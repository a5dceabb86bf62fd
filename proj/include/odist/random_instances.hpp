#pragma once

// Seeded random facility metrics, profiles and problems for property tests,
// the acceptance suite and the benchmarks.

#include <cstddef>
#include <random>

#include "odist/assignment.hpp"
#include "odist/core_model.hpp"

namespace odist {

enum class MetricFamily {
  Euclidean,     // points in the plane
  ShortestPath,  // small integer edge weights, many ties
  Clustered,     // groups of co-located facilities
};

/// One of the families above, drawn uniformly unless given.
FacilityDistances random_facility_distances(std::size_t m, std::mt19937_64& rng);
FacilityDistances random_facility_distances(std::size_t m, MetricFamily family, std::mt19937_64& rng);

/// Facility distances with no two pairs at equal distance.
FacilityDistances random_generic_distances(std::size_t m, std::mt19937_64& rng);

/// Half the time uniform random rankings, otherwise rankings induced by
/// random agent positions consistent with l.
PreferenceProfile random_profile(std::size_t n, const FacilityDistances& l, std::mt19937_64& rng);

/// A preset-compatible spec for n agents and m facilities (matching presets
/// need n == m). Draws k, opening costs, and occasionally pair constraints
/// or penalties where the preset tolerates them.
ProblemSpec random_problem_spec(Preset preset, std::size_t n, std::size_t m, std::mt19937_64& rng,
                                bool extras = true);

}  // namespace odist
