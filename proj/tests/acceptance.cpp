// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "odist/audit.hpp"
#include "odist/cli.hpp"
#include "odist/generators.hpp"
#include "odist/instance_io.hpp"
#include "odist/random_instances.hpp"
#include "odist/reduction.hpp"
#include "odist/social_choice.hpp"
#include "odist/solvers.hpp"
#include "oracles.hpp"

using namespace odist;

namespace {

// Tolerances, all absolute unless noted.
constexpr double kBoundTol = 1e-6;        // audited distortion vs a theorem bound
constexpr double kTightTol = 1e-6;        // audited distortion vs an exact tight value
constexpr double kFormulaTol = 1e-9;      // realized ratio vs closed form
constexpr double kInequalityTol = 1e-9;   // c(x,d) <= (1+2 beta) OPT(d) + tol
constexpr double kOracleRelTol = 1e-6;    // audit vs oracle, relative to max(1, value)
constexpr double kWitnessTol = 1e-6;      // witness ratio vs reported distortion, relative to max(1, value)
constexpr double kWitnessFeasTol = 1e-7;  // witness constraint slack
constexpr double kRatioExactTol = 1e-12;  // ratios the examples fix exactly
constexpr double kReproSeconds = 300.0;

struct Verdict {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail << "first failure: " << what << "; ";
    passed = passed && ok;
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

bool rel_close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

bool witness_ok(const AuditReport& r, const PreferenceProfile& profile, const FacilityDistances& l) {
  if (std::isinf(r.distortion)) return !r.witness;
  return r.witness && consistency_constraints(profile, l).satisfied_by(*r.witness, kWitnessFeasTol) &&
         std::abs(r.witness_ratio - r.distortion) <= kWitnessTol * std::max(1.0, r.distortion);
}

struct SuiteInstance {
  FacilityDistances l;
  PreferenceProfile profile;
};

// Shared by criteria 1 and 5.
std::vector<SuiteInstance> sum_suite() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> nn(1, 8), mm(2, 5);
  std::vector<SuiteInstance> out;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = nn(rng), m = mm(rng);
    auto l = random_facility_distances(m, rng);
    auto profile = random_profile(n, l, rng);
    out.push_back({std::move(l), std::move(profile)});
  }
  return out;
}

void criterion1(Verdict& o) {
  const auto suite = sum_suite();
  double worst = 0.0;
  int checked = 0;
  for (std::size_t t = 0; t < suite.size(); ++t) {
    const auto& [l, profile] = suite[t];
    const auto w = sum_winner(project_agents(profile, l)).winner;
    const auto r = audit_sum_social_choice(w, profile, l);
    worst = std::max(worst, r.distortion);
    o.require(r.distortion <= 3.0 + kBoundTol, "instance " + std::to_string(t) + " audits to " + num(r.distortion));
    if (l.size() <= 4 && checked < 100) {
      ++checked;
      const double ref = oracle::sum_distortion(w, profile, l);
      o.require(rel_close(r.distortion, ref, kOracleRelTol),
                "instance " + std::to_string(t) + " LP " + num(r.distortion) + " vs oracle " + num(ref));
    }
  }
  o.detail << suite.size() << " instances, max audited sum distortion " << num(worst) << ", " << checked
           << " cross-checked against the vertex oracle";
}

void criterion2(Verdict& o) {
  const Instance in = gen_paper_example("two_candidate_tie");
  for (FacilityIdx w = 0; w < 2; ++w) {
    const auto r = audit_sum_social_choice(w, in.preferences, in.distances());
    o.require(std::abs(r.distortion - 3.0) <= kTightTol, in.facilities.name(w) + " audits to " + num(r.distortion));
    o.require(witness_ok(r, in.preferences, in.distances()), "witness for " + in.facilities.name(w));
    const double ref = oracle::sum_distortion(w, in.preferences, in.distances());
    o.require(std::abs(ref - 3.0) <= kTightTol, "oracle gives " + num(ref));
    o.detail << in.facilities.name(w) << ": " << num(r.distortion) << " (witness " << num(r.witness_ratio) << ") ";
  }
}

void criterion3(Verdict& o) {
  std::mt19937_64 rng(3033);
  std::uniform_int_distribution<std::size_t> nn(1, 7), mm(2, 4);
  const double alphas[] = {0.5, 0.6, 0.75, 1.0};
  double worst_exact = 0.0, worst_sampled = 0.0, worst_alpha_exact = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = nn(rng), m = mm(rng);
    const auto l = random_facility_distances(m, rng);
    const auto profile = random_profile(n, l, rng);
    const auto w = median_winner(profile, DistancePartialOrder::from_distances(l)).winner;
    const auto r = audit_percentile_social_choice(w, profile, l, 0.5);
    worst_exact = std::max(worst_exact, r.distortion);
    o.require(r.exact && r.distortion <= 3.0 + kBoundTol,
              "instance " + std::to_string(t) + " median audit " + num(r.distortion));
    for (double alpha : alphas) {
      const auto s = sample_percentile_social_choice(w, profile, l, alpha, 20, 1000 + t);
      worst_sampled = std::max(worst_sampled, s.distortion);
      o.require(s.distortion <= 3.0 + kBoundTol,
                "instance " + std::to_string(t) + " alpha " + num(alpha) + " sampled " + num(s.distortion));
      const auto e = audit_percentile_social_choice(w, profile, l, alpha);
      worst_alpha_exact = std::max(worst_alpha_exact, e.distortion);
      o.require(e.distortion <= 3.0 + kBoundTol,
                "instance " + std::to_string(t) + " alpha " + num(alpha) + " exact " + num(e.distortion));
    }
  }
  o.detail << "200 instances: max exact median distortion " << num(worst_exact)
           << "; alpha in {0.5,0.6,0.75,1}: max sampled " << num(worst_sampled) << ", max exact "
           << num(worst_alpha_exact);
}

void criterion4(Verdict& o) {
  const Instance in = gen_paper_example("median_topchoice_bad");
  const auto projected = sum_winner(project_agents(in.preferences, in.distances())).winner;
  const FullMetric d = in.full_metric();
  const double med_w = evaluate_percentile_cost(projected, d, 0.5);
  const double med_x = evaluate_percentile_cost(in.facilities.index_of("X"), d, 0.5);
  const double ratio = social_choice_ratio(projected, d, AuditObjective::Percentile, 0.5);
  o.require(in.facilities.name(projected) == "W", "projected-sum winner is " + in.facilities.name(projected));
  o.require(med_w == 5.0 && med_x == 1.0, "med(W)=" + num(med_w) + ", med(X)=" + num(med_x));
  o.require(std::abs(ratio - 5.0) <= kRatioExactTol, "ratio " + num(ratio));
  const auto w = median_winner(in.preferences, in.partial_order()).winner;
  const auto a = audit_percentile_social_choice(w, in.preferences, in.distances(), 0.5);
  o.require(a.distortion <= 3.0 + kBoundTol, "median winner audits to " + num(a.distortion));
  o.detail << "projected-sum winner " << in.facilities.name(projected) << " med " << num(med_w) << " vs med(X) "
           << num(med_x) << " (ratio " << num(ratio) << "); median winner " << in.facilities.name(w)
           << " audits to " << num(a.distortion);
}

void criterion5(Verdict& o) {
  const double q = 1000, eps = 1e-4;
  const Instance in = gen_paper_example("sum5_tight", {{"q", q}, {"eps", eps}});
  const auto w = median_winner(in.preferences, in.partial_order()).winner;
  const double ratio = social_choice_ratio(w, in.full_metric(), AuditObjective::Sum);
  const double expected = (q * (5 - 4 * eps) + 1) / (q + 1);
  o.require(in.facilities.name(w) == "W", "winner " + in.facilities.name(w));
  o.require(std::abs(ratio - expected) <= kFormulaTol, "ratio " + num(ratio) + " vs " + num(expected));
  double worst = 0.0;
  const auto suite = sum_suite();
  for (std::size_t t = 0; t < suite.size(); ++t) {
    const auto& [l, profile] = suite[t];
    const auto mw = median_winner(profile, DistancePartialOrder::from_distances(l)).winner;
    const auto r = audit_sum_social_choice(mw, profile, l);
    worst = std::max(worst, r.distortion);
    o.require(r.distortion <= 5.0 + kBoundTol, "instance " + std::to_string(t) + " audits to " + num(r.distortion));
  }
  o.detail << "winner W, sum ratio " << num(ratio) << " (formula " << num(expected) << "); suite max " << num(worst);
}

void criterion6(Verdict& o) {
  std::mt19937_64 rng(6066);
  std::uniform_int_distribution<std::size_t> nn(1, 4);
  double worst = 0.0;
  ProblemSpec spec;
  spec.preset = Preset::MatchingMinCost;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = nn(rng);
    const auto l = random_facility_distances(n, rng);
    const auto profile = random_profile(n, l, rng);
    const auto red = reduce_and_solve(spec, profile, l, SolverKind::MinCostMatching);
    o.require(red.solver.beta == 1.0 && red.solver.exact, "matcher is not exact");
    const auto p = build_problem(spec, n, n);
    const auto r = audit_additive_assignment(red.assignment, profile, l, p);
    worst = std::max(worst, r.distortion);
    o.require(r.distortion <= 3.0 + kBoundTol, "instance " + std::to_string(t) + " audits to " + num(r.distortion));
  }
  const Instance in = gen_paper_example("matching_lb3");
  const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
  const auto red = reduce_and_solve(in.problem, in.preferences, in.distances(), SolverKind::MinCostMatching);
  const auto r = audit_additive_assignment(red.assignment, in.preferences, in.distances(), p);
  o.require(std::abs(r.distortion - 3.0) <= kTightTol, "matching_lb3 audits to " + num(r.distortion));
  o.detail << "200 instances max " << num(worst) << "; matching_lb3 audits to " << num(r.distortion);
}

void criterion7(Verdict& o) {
  std::mt19937_64 rng(7077);
  const Preset presets[] = {Preset::SocialChoiceSum, Preset::MatchingMinCost, Preset::MatchingEgalitarian,
                            Preset::KCenter,         Preset::KMedian,         Preset::FacilityLocation};
  double worst = 0.0, worst_greedy = 0.0;
  long checks = 0;
  auto run = [&](Preset preset, SolverKind solver, bool extras, double factor, double& worst_ratio) {
    for (int t = 0; t < 200; ++t) {
      const bool matching = preset == Preset::MatchingMinCost || preset == Preset::MatchingEgalitarian;
      std::uniform_int_distribution<std::size_t> mm(2, 4), nn(1, 5);
      const std::size_t m = mm(rng);
      const std::size_t n = matching ? m : nn(rng);
      const auto l = random_facility_distances(m, rng);
      const auto profile = random_profile(n, l, rng);
      const auto spec = random_problem_spec(preset, n, m, rng, extras);
      const auto red = reduce_and_solve(spec, profile, l, solver);
      const auto p = build_problem(spec, n, m);
      o.require(p.is_valid(red.assignment), std::string(to_string(preset)) + ": invalid reduction output");
      for (int s = 0; s < 20; ++s) {
        const auto d = sample_consistent_metric(profile, l, rng);
        const double c = total_cost(red.assignment, d, p.cost());
        const double opt = minimize_assignment(p, d.agent_facility()).cost;
        ++checks;
        if (opt > 0) worst_ratio = std::max(worst_ratio, c / opt);
        o.require(c <= factor * opt + kInequalityTol, std::string(to_string(preset)) + " instance " +
                                                          std::to_string(t) + ": " + num(c) + " > " +
                                                          num(factor) + " * " + num(opt));
      }
    }
  };
  for (auto preset : presets) run(preset, SolverKind::BruteForce, true, 3.0, worst);
  run(Preset::KCenter, SolverKind::KCenterGreedy, false, 5.0, worst_greedy);
  o.detail << checks << " (instance, metric) checks; brute force max ratio " << num(worst)
           << " (bound 3), k_center greedy max ratio " << num(worst_greedy) << " (bound 5)";
}

double scenario_ratio(const Scenario& s, const AssignmentProblem& p, Verdict& o, const PreferenceProfile& profile) {
  const FullMetric d(*s.true_metric, s.facility_distances);
  o.require(check_consistency(profile, d), s.label + " metric is inconsistent");
  return assignment_ratio(*s.assignment, d, p);
}

void criterion8(Verdict& o) {
  {
    const Instance in = gen_paper_example("median_matching_unbounded", {{"eps", 1e-3}});
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    const auto matchings = valid_assignments(p, kMaxAuditAlternatives);
    double weakest = std::numeric_limits<double>::infinity();
    for (const auto& s : in.scenarios)
      o.require(check_consistency(in.preferences, FullMetric(*s.true_metric, s.facility_distances)),
                s.label + " inconsistent");
    for (const auto& x : matchings) {
      double best = 0.0;
      for (const auto& s : in.scenarios) {
        const Matrix& d = *s.true_metric;
        auto med = [&](const Assignment& y) { return percentile_value(distance_vector(y, d), 0.5); };
        double opt = std::numeric_limits<double>::infinity();
        for (const auto& y : matchings) opt = std::min(opt, med(y));
        best = std::max(best, med(x) / opt);
      }
      weakest = std::min(weakest, best);
    }
    o.require(weakest >= 400.0, "median matching ratio only " + num(weakest));
    o.detail << "median matching >= " << num(weakest) << "; ";
  }
  {
    const Instance in = gen_paper_example("facility_location_unbounded", {{"L", 1e6}});
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    for (const auto& s : in.scenarios) {
      const double r = scenario_ratio(s, p, o, in.preferences);
      if (s.label != "open_both") o.require(r >= 1000.0, s.label + " ratio " + num(r));
      o.detail << s.label << " " << num(r) << "; ";
    }
  }
  {
    const Instance in = gen_paper_example("kmedian_lb", {{"q", 5}});
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    o.require(in.scenarios.size() == 3, "kmedian_lb needs three winner pairs");
    for (const auto& s : in.scenarios) {
      const double r = scenario_ratio(s, p, o, in.preferences);
      o.require(r >= 5.0, s.label + " ratio " + num(r));
      o.detail << s.label << " " << num(r) << "; ";
    }
  }
  {
    const Instance in = gen_paper_example("egalitarian_lb", {{"eps", 1e-6}});
    const auto p = build_problem(in.problem, in.num_agents(), in.num_facilities());
    for (const auto& s : in.scenarios) {
      const double r = scenario_ratio(s, p, o, in.preferences);
      o.require(r >= 2.0 - 1e-3, s.label + " ratio " + num(r));
      o.detail << s.label << " " << num(r) << "; ";
    }
  }
}

void criterion9(Verdict& o) {
  std::mt19937_64 rng(9099);
  std::uniform_int_distribution<int> ints(0, 100);
  std::uniform_real_distribution<double> reals(0.0, 100.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    Matrix ci(n, n), cr(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ci(i, j) = ints(rng);
        cr(i, j) = reals(rng);
      }
    for (const Matrix* c : {&ci, &cr}) {
      const auto sum = min_cost_matching(*c).assignment;
      const auto bot = bottleneck_matching(*c).assignment;
      double s = 0.0, b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += (*c)(i, sum[i]);
        b = std::max(b, (*c)(i, bot[i]));
      }
      if (c == &ci) o.require(s == oracle::matching_sum_opt(*c), "min-cost matching differs on trial " + std::to_string(t));
      o.require(b == oracle::matching_bottleneck_opt(*c), "bottleneck differs on trial " + std::to_string(t));
    }
    // real-valued sums may associate differently; equal up to one rounding per term
    const auto sum = min_cost_matching(cr).assignment;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cr(i, sum[i]);
    o.require(std::abs(s - oracle::matching_sum_opt(cr)) <= 1e-12 * std::max(1.0, s),
              "real min-cost matching differs on trial " + std::to_string(t));
  }
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + t % 6;
    const auto l = random_facility_distances(m, rng);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::vector<FacilityIdx> tops(1 + t % 10);
    for (auto& f : tops) f = pick(rng);
    const ProjectedAgents agents(tops, l);
    const std::size_t k = 1 + t % m;
    const auto x = k_center_greedy(agents, k).assignment;
    const Matrix d = agents.cost_matrix();
    double radius = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) radius = std::max(radius, d(i, x[i]));
    const double opt = oracle::k_center_opt(d, k);
    if (opt > 0) worst = std::max(worst, radius / opt);
    o.require(radius <= 2.0 * opt + kInequalityTol, "k-center trial " + std::to_string(t));
  }
  o.detail << "200 matchings equal the permutation oracle; k-center greedy max ratio " << num(worst);
}

void criterion10(Verdict& o) {
  std::mt19937_64 rng(10101);
  {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + t % 10;
      std::vector<double> s(n), s2(n), up(n), sum(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = u(rng);
        s2[i] = u(rng);
        up[i] = s[i] + (t % 3 == 0 ? 0.0 : u(rng));
        sum[i] = s[i] + s2[i];
      }
      for (auto c : {DistanceCost::Sum, DistanceCost::Max}) {
        o.require(distance_cost(c, s) <= distance_cost(c, up), "monotonicity");
        o.require(distance_cost(c, sum) <= distance_cost(c, s) + distance_cost(c, s2) + 1e-12, "subadditivity");
      }
    }
    o.detail << "1000 cost-vector pairs; ";
  }
  {
    for (int t = 0; t < 200; ++t) {
      const std::size_t m = 1 + t % 5, n = 1 + t % 6;
      const auto l = random_facility_distances(m, rng);
      const auto profile = random_profile(n, l, rng);
      const auto d = sample_consistent_metric(profile, l, rng);
      o.require(check_consistency(profile, d), "sampled metric inconsistent");
      const auto back = preferences_from_metric(d);
      o.require(check_consistency(back, d), "metric -> rankings round trip");
    }
    o.detail << "200 consistency round trips; ";
  }
  {
    int audits = 0;
    for (int t = 0; t < 60; ++t) {
      const std::size_t m = 2 + t % 3, n = 1 + t % 6;
      const auto l = random_facility_distances(m, rng);
      const auto profile = random_profile(n, l, rng);
      const FacilityIdx w = t % m;
      const auto sum = audit_sum_social_choice(w, profile, l);
      const auto pct = audit_percentile_social_choice(w, profile, l, t % 2 ? 0.5 : 0.75);
      ProblemSpec spec;
      spec.preset = Preset::KMedian;
      spec.k = 1 + t % m;
      const auto p = build_problem(spec, n, m);
      const auto alts = valid_assignments(p, kMaxAuditAlternatives);
      const Assignment x = alts[static_cast<std::size_t>(t) % alts.size()];
      const auto asg = audit_additive_assignment(x, profile, l, p);
      for (const auto* r : {&sum, &pct, &asg}) {
        ++audits;
        o.require(witness_ok(*r, profile, l), "witness fidelity, instance " + std::to_string(t));
        if (r->witness) {
          const FullMetric d(*r->witness, l, kWitnessFeasTol);
          const double again = r == &asg ? assignment_ratio(x, d, p)
                               : r == &sum ? social_choice_ratio(w, d, AuditObjective::Sum)
                                           : social_choice_ratio(w, d, AuditObjective::Percentile, r->alpha);
          o.require(std::abs(again - r->distortion) <= kWitnessTol * std::max(1.0, r->distortion),
                    "recomputed witness ratio, instance " + std::to_string(t));
        }
      }
    }
    o.detail << audits << " audit witnesses; ";
  }
  {
    int files = 0;
    for (const auto& e : std::filesystem::directory_iterator(ODIST_FIXTURE_DIR)) {
      if (e.path().extension() != ".json") continue;
      ++files;
      const Instance in = load_instance(e.path());
      const std::string canon = serialize_instance(in);
      const Instance back = parse_instance(canon);
      o.require(back == in && serialize_instance(back) == canon, "round trip " + e.path().filename().string());
    }
    o.require(files > 0, "no fixtures found");
    o.detail << files << " fixture round trips; ";
  }
  {
    std::ostringstream out, err;
    const auto start = std::chrono::steady_clock::now();
    const int code = run_command({"repro", "--all"}, out, err);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(code == kExitOk, "repro --all exited " + std::to_string(code) + ": " + out.str());
    o.require(secs < kReproSeconds, "repro took " + num(secs) + " s");
    o.detail << "repro --all exit " << code << " in " << num(secs) << " s";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"sum winner distortion <= 3 on 500 random instances", criterion1},
      {"two-candidate tie audits to exactly 3", criterion2},
      {"median winner percentile distortion <= 3", criterion3},
      {"projected-sum rule is 5x worse on the median example", criterion4},
      {"median winner sum distortion: tight example and <= 5", criterion5},
      {"matching reduction distortion <= 3", criterion6},
      {"reduction inequality c(x,d) <= (1+2 beta) OPT(d)", criterion7},
      {"lower-bound constructions", criterion8},
      {"solver oracles", criterion9},
      {"property suites, fixtures and repro", criterion10},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first << ", "
              << num(secs) << " s): " << o.detail.str() << std::endl;
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
