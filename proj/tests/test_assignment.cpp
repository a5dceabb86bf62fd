#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "odist/assignment.hpp"
#include "odist/audit.hpp"
#include "odist/generators.hpp"
#include "odist/random_instances.hpp"
#include "odist/reduction.hpp"
#include "odist/social_choice.hpp"

using namespace odist;

namespace {

// Every map agents -> facilities, filtered by validity.
std::vector<Assignment> all_valid(const AssignmentProblem& p) {
  std::vector<Assignment> out;
  const std::size_t n = p.num_agents(), m = p.num_facilities();
  Assignment x(n, 0);
  while (true) {
    if (p.is_valid(x)) out.push_back(x);
    std::size_t i = n;
    while (i > 0 && ++x[i - 1] == m) x[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

double recompute_cost(const Assignment& x, const Matrix& d, const CostSpec& spec) {
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = d(i, x[i]);
    dist = spec.distance_cost == DistanceCost::Sum ? dist + s : std::max(dist, s);
  }
  double fac = 0.0;
  for (std::size_t f = 0; f < spec.opening_costs.size(); ++f)
    if (std::find(x.begin(), x.end(), f) != x.end()) fac += spec.opening_costs[f];
  for (const auto& pen : spec.penalties)
    if (x[pen.a] == x[pen.b]) fac += pen.penalty;
  return dist + fac;
}

}  // namespace

TEST_SUITE("assignment") {
  TEST_CASE("validity predicates") {
    ConstraintSet caps;
    caps.capacities = {1, 1};
    CHECK(is_valid({0, 1}, caps, 2));
    CHECK(!is_valid({0, 0}, caps, 2));
    ConstraintSet one;
    one.max_open = 1;
    one.min_open = 1;
    CHECK(is_valid({1, 1, 1}, one, 2));
    CHECK(!is_valid({1, 0, 1}, one, 2));
    ConstraintSet pairs;
    pairs.together = {{0, 1}};
    pairs.apart = {{1, 2}};
    CHECK(is_valid({0, 0, 1}, pairs, 2));
    CHECK(!is_valid({0, 1, 1}, pairs, 2));
    CHECK(!is_valid({0, 0, 0}, pairs, 2));
    CHECK(!is_valid({0, 2}, ConstraintSet{}, 2));
  }

  TEST_CASE("cost functionals") {
    const std::vector<double> s{1, 4, 2};
    CHECK(distance_cost(DistanceCost::Sum, s) == 7);
    CHECK(distance_cost(DistanceCost::Max, s) == 4);
    CHECK(parse_distance_cost("max") == DistanceCost::Max);
    CHECK_THROWS_AS(parse_distance_cost("median"), UnsupportedCost);
  }

  TEST_CASE("property: sum and max are monotone and subadditive") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + trial % 9;
      std::vector<double> s(n), t(n), bigger(n), both(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = u(rng);
        t[i] = u(rng);
        bigger[i] = s[i] + t[i] * (i % 2);
        both[i] = s[i] + t[i];
      }
      for (auto c : {DistanceCost::Sum, DistanceCost::Max}) {
        CHECK(distance_cost(c, s) <= distance_cost(c, bigger) + 1e-12);
        CHECK(distance_cost(c, both) <= distance_cost(c, s) + distance_cost(c, t) + 1e-12);
      }
    }
  }

  TEST_CASE("total cost on the facility-location example") {
    const auto in = gen_paper_example("facility_location_unbounded", {{"L", 1e6}});
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    CHECK(total_cost({0, 1}, in.full_metric(), p.cost()) == doctest::Approx(103));
    Matrix zero(2, 2, 0.0);
    CHECK(total_cost({0, 1}, zero, CostSpec{}) == 0);
  }

  TEST_CASE("property: total cost matches an independent recomputation") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 5, m = 1 + trial % 4;
      const auto spec = random_problem_spec(Preset::FacilityLocation, n, m, rng);
      Matrix d(n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < m; ++f) d(i, f) = u(rng);
      const auto p = build_problem(spec, n, m);
      for (const auto& x : all_valid(p))
        CHECK(total_cost(x, d, p.cost()) == doctest::Approx(recompute_cost(x, d, p.cost())).epsilon(1e-12));
    }
  }

  TEST_CASE("presets") {
    for (auto p : all_presets()) CHECK(parse_preset(to_string(p)) == p);
    CHECK_THROWS_AS(parse_preset("max_flow"), InputError);
    ProblemSpec median;
    median.preset = Preset::SocialChoiceMedian;
    CHECK_THROWS_AS(build_problem(median, 3, 2), UnsupportedCost);

    ProblemSpec matching;
    matching.preset = Preset::MatchingMinCost;
    CHECK_THROWS_AS(build_problem(matching, 3, 2), InputError);
    const auto mp = build_problem(matching, 2, 2);
    CHECK(all_valid(mp).size() == 2);

    ProblemSpec kc;
    kc.preset = Preset::KCenter;
    kc.k = 2;
    const auto kp = build_problem(kc, 3, 3);
    CHECK(kp.cost().distance_cost == DistanceCost::Max);
    CHECK(!kp.is_valid({0, 1, 2}));
    CHECK(kp.is_valid({0, 1, 1}));
    kc.k = 4;
    CHECK_THROWS_AS(build_problem(kc, 3, 3), InputError);

    ProblemSpec sc;
    const auto sp = build_problem(sc, 3, 2);
    CHECK(all_valid(sp).size() == 2);

    ProblemSpec bad;
    bad.preset = Preset::FacilityLocation;
    bad.apart = {{0, 1}};
    CHECK_THROWS_AS(build_problem(bad, 2, 1), InputError);
  }

  TEST_CASE("enumeration matches independent filtering") {
    std::mt19937_64 rng(47);
    for (auto preset : all_presets()) {
      if (preset == Preset::SocialChoiceMedian) continue;
      for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 1 + trial % 4;
        const bool matching = preset == Preset::MatchingMinCost || preset == Preset::MatchingEgalitarian;
        const std::size_t n = matching ? m : 1 + trial % 5;
        const auto p = build_problem(random_problem_spec(preset, n, m, rng), n, m);
        std::vector<Assignment> seen;
        for_each_valid_assignment(p, [&](const Assignment& x) { seen.push_back(x); });
        CHECK(seen == all_valid(p));
      }
    }
  }

  TEST_CASE("brute-force minimum: serial equals parallel equals oracle") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> small(0, 4);
    for (auto preset : all_presets()) {
      if (preset == Preset::SocialChoiceMedian) continue;
      for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 2 + trial % 4;
        const bool matching = preset == Preset::MatchingMinCost || preset == Preset::MatchingEgalitarian;
        const std::size_t n = matching ? m : 2 + trial % 5;
        const auto p = build_problem(random_problem_spec(preset, n, m, rng), n, m);
        Matrix d(n, m);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t f = 0; f < m; ++f) d(i, f) = small(rng);  // integer costs force ties
        const auto serial = minimize_assignment(p, d, Execution::Serial);
        const auto parallel = minimize_assignment(p, d, Execution::Parallel);
        CHECK(serial.assignment == parallel.assignment);
        CHECK(serial.cost == parallel.cost);
        double best_cost = std::numeric_limits<double>::infinity();
        for (const auto& x : all_valid(p)) {
          const double c = recompute_cost(x, d, p.cost());
          best_cost = std::min(best_cost, c);
        }
        CHECK(serial.cost == doctest::Approx(best_cost));
        CHECK(recompute_cost(serial.assignment, d, p.cost()) == doctest::Approx(best_cost));
      }
    }
  }

  TEST_CASE("search-space limit") {
    ProblemSpec sc;
    sc.preset = Preset::KMedian;
    sc.k = 2;
    const auto p = build_problem(sc, 12, 4);
    CHECK_THROWS_AS(minimize_assignment(p, Matrix(12, 4), Execution::Serial, 1000), SearchSpaceTooLarge);
  }

  TEST_CASE("projection keeps constraints and reads distances off l") {
    const auto l = FacilityDistances(Matrix::from_rows({{0, 4}, {4, 0}}));
    const auto profile = PreferenceProfile::full(2, {{0, 1}, {0, 1}, {1, 0}});
    ProblemSpec kc;
    kc.preset = Preset::KCenter;
    kc.k = 1;
    const auto pp = project_problem(profile, l, build_problem(kc, 3, 2));
    CHECK(pp.distances(0, 1) == 4);
    CHECK(pp.distances(2, 1) == 0);
    CHECK(pp.problem.constraints().max_open == 1u);
  }

  TEST_CASE("reduction: social choice matches the sum winner") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t m = 2 + trial % 4, n = 1 + trial % 6;
      const auto l = random_facility_distances(m, rng);
      const auto profile = random_profile(n, l, rng);
      const auto red = reduce_and_solve(ProblemSpec{}, profile, l, SolverKind::BruteForce);
      const auto w = sum_winner(project_agents(profile, l)).winner;
      CHECK(red.assignment == Assignment(n, w));
      CHECK(red.guarantee == 3.0);
    }
  }

  TEST_CASE("reduction: outputs are valid and the guarantee is 1 + 2 beta") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t m = 2 + trial % 3, n = 2 + trial % 4;
      const auto l = random_facility_distances(m, rng);
      ProblemSpec kc;
      kc.preset = Preset::KCenter;
      kc.k = 1 + trial % m;
      const auto profile = random_profile(n, l, rng);
      const auto red = reduce_and_solve(kc, profile, l, SolverKind::KCenterGreedy);
      CHECK(build_problem(kc, n, m).is_valid(red.assignment));
      CHECK(red.guarantee == 5.0);

      const auto spec = random_problem_spec(Preset::FacilityLocation, n, m, rng);
      const auto fl = reduce_and_solve(spec, profile, l, SolverKind::BruteForce);
      CHECK(build_problem(spec, n, m).is_valid(fl.assignment));
    }
  }

  TEST_CASE("reduction rejects unfit solvers") {
    const auto l = FacilityDistances(Matrix::from_rows({{0, 1}, {1, 0}}));
    const auto profile = PreferenceProfile::full(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(reduce_and_solve(ProblemSpec{}, profile, l, SolverKind::MinCostMatching), InputError);
    ProblemSpec m;
    m.preset = Preset::MatchingMinCost;
    m.together = {{0, 1}};
    CHECK_THROWS_AS(reduce_and_solve(m, profile, l, SolverKind::MinCostMatching), InputError);
    ProblemSpec median;
    median.preset = Preset::SocialChoiceMedian;
    CHECK_THROWS_AS(reduce_and_solve(median, profile, l, SolverKind::BruteForce), UnsupportedCost);
  }

  TEST_CASE("matching example audits to 3") {
    const auto in = gen_paper_example("matching_lb3");
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    const auto red = reduce_and_solve(in.problem, in.preferences, in.distances(), SolverKind::MinCostMatching);
    CHECK(red.assignment == Assignment{0, 1});
    CHECK(assignment_ratio(red.assignment, in.full_metric(), p) == doctest::Approx(3.0));
  }
}
