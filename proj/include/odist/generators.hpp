#pragma once

// Constructions of the worked examples and lower-bound instances.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "odist/instance.hpp"

namespace odist {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kDefaultQ = 1000;
inline constexpr double kDefaultL = 1e6;

/// sum5_tight, median_topchoice_bad, median_matching_unbounded,
/// facility_location_unbounded, kmedian_lb, egalitarian_lb, matching_lb3,
/// plus two_candidate_tie.
std::vector<std::string> paper_example_names();

/// Parameters: q (agents per group), eps, L. Unknown names or parameters
/// the example does not take raise InputError.
Instance gen_paper_example(std::string_view name, const std::map<std::string, double>& params = {});

/// "q=1000,eps=1e-4" -> {q: 1000, eps: 1e-4}.
std::map<std::string, double> parse_params(std::string_view text);

}  // namespace odist
