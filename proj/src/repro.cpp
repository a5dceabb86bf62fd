#include "odist/repro.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "odist/audit.hpp"
#include "odist/generators.hpp"
#include "odist/reduction.hpp"
#include "odist/social_choice.hpp"

namespace odist {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

ReproCheck check(std::string name, const std::function<std::pair<bool, std::string>()>& body) {
  ReproCheck c{std::move(name), false, {}};
  try {
    auto [ok, detail] = body();
    c.passed = ok;
    c.detail = std::move(detail);
  } catch (const std::exception& e) {
    c.detail = std::string("error: ") + e.what();
  }
  return c;
}

double median_cost(const Assignment& x, const Matrix& d) {
  const auto s = distance_vector(x, d);
  return percentile_value(s, 0.5);
}

}  // namespace

std::vector<ReproCheck> run_repro() {
  std::vector<ReproCheck> out;

  out.push_back(check("sum5_tight", [] {
    const double q = 1000, eps = 1e-4;
    const Instance in = gen_paper_example("sum5_tight", {{"q", q}, {"eps", eps}});
    const auto w = median_winner(in.preferences, in.partial_order()).winner;
    const double ratio = social_choice_ratio(w, in.full_metric(), AuditObjective::Sum);
    const double expected = (q * (5 - 4 * eps) + 1) / (q + 1);
    const bool ok = in.facilities.name(w) == "W" && std::abs(ratio - expected) <= 1e-9;
    return std::pair{ok, "winner " + in.facilities.name(w) + ", sum ratio " + fmt(ratio) + " (expected " +
                             fmt(expected) + ")"};
  }));

  out.push_back(check("median_topchoice_bad", [] {
    const Instance in = gen_paper_example("median_topchoice_bad");
    const auto projected = sum_winner(project_agents(in.preferences, in.distances())).winner;
    const double ratio = social_choice_ratio(projected, in.full_metric(), AuditObjective::Percentile, 0.5);
    const auto w = median_winner(in.preferences, in.partial_order()).winner;
    const auto audit = audit_percentile_social_choice(w, in.preferences, in.distances(), 0.5);
    const bool ok = in.facilities.name(projected) == "W" && std::abs(ratio - 5.0) <= 1e-12 &&
                    audit.distortion <= 3.0 + 1e-6;
    return std::pair{ok, "projected-sum winner " + in.facilities.name(projected) + " has median ratio " +
                             fmt(ratio) + "; majority-graph winner " + in.facilities.name(w) +
                             " audits to " + fmt(audit.distortion)};
  }));

  out.push_back(check("median_matching_unbounded", [] {
    const Instance in = gen_paper_example("median_matching_unbounded", {{"eps", 1e-3}});
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    const auto matchings = valid_assignments(problem, kMaxAuditAlternatives);
    double weakest = std::numeric_limits<double>::infinity();
    for (const auto& x : matchings) {
      double worst = 0.0;
      for (const auto& s : in.scenarios) {
        const Matrix& d = *s.true_metric;
        double opt = std::numeric_limits<double>::infinity();
        for (const auto& y : matchings) opt = std::min(opt, median_cost(y, d));
        worst = std::max(worst, median_cost(x, d) / opt);
      }
      weakest = std::min(weakest, worst);
    }
    return std::pair{weakest >= 400.0,
                     "every matching reaches median ratio >= " + fmt(weakest) + " on some scenario"};
  }));

  out.push_back(check("facility_location_unbounded", [] {
    const Instance in = gen_paper_example("facility_location_unbounded", {{"L", 1e6}});
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    const double both = total_cost(Assignment{0, 1}, in.full_metric(), problem.cost());
    bool ok = std::abs(both - 103.0) <= 1e-9;
    std::string detail = "open both costs " + fmt(both);
    for (const auto& s : in.scenarios) {
      const double r = assignment_ratio(*s.assignment, FullMetric(*s.true_metric, s.facility_distances), problem);
      const bool single = s.label != "open_both";
      ok = ok && r >= (single ? 1000.0 : 100.0);
      detail += "; " + s.label + " ratio " + fmt(r);
    }
    return std::pair{ok, detail};
  }));

  out.push_back(check("kmedian_lb", [] {
    const double q = 5;
    const Instance in = gen_paper_example("kmedian_lb", {{"q", q}});
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    bool ok = in.scenarios.size() == 3;
    std::string detail;
    for (const auto& s : in.scenarios) {
      const double r = assignment_ratio(*s.assignment, FullMetric(*s.true_metric, s.facility_distances), problem);
      ok = ok && r >= q;
      detail += (detail.empty() ? "" : "; ") + s.label + " ratio " + fmt(r);
    }
    return std::pair{ok, detail};
  }));

  out.push_back(check("egalitarian_lb", [] {
    const Instance in = gen_paper_example("egalitarian_lb", {{"eps", 1e-6}});
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    bool ok = !in.scenarios.empty();
    std::string detail;
    for (const auto& s : in.scenarios) {
      const double r = assignment_ratio(*s.assignment, FullMetric(*s.true_metric, s.facility_distances), problem);
      ok = ok && r >= 2.0 - 1e-3;
      detail += (detail.empty() ? "" : "; ") + s.label + " ratio " + fmt(r);
    }
    return std::pair{ok, detail};
  }));

  out.push_back(check("matching_lb3", [] {
    const Instance in = gen_paper_example("matching_lb3");
    const auto red = reduce_and_solve(in.problem, in.preferences, in.distances(), SolverKind::BruteForce);
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    const auto audit = audit_additive_assignment(red.assignment, in.preferences, in.distances(), problem);
    const double realized = assignment_ratio(red.assignment, in.full_metric(), problem);
    const bool ok = red.assignment == Assignment{0, 1} && std::abs(audit.distortion - 3.0) <= 1e-6 &&
                    std::abs(realized - 3.0) <= 1e-12;
    return std::pair{ok, "audit " + fmt(audit.distortion) + ", ratio on the listed metric " + fmt(realized)};
  }));

  out.push_back(check("two_candidate_tie", [] {
    const Instance in = gen_paper_example("two_candidate_tie");
    const double x = audit_sum_social_choice(0, in.preferences, in.distances()).distortion;
    const double y = audit_sum_social_choice(1, in.preferences, in.distances()).distortion;
    const bool ok = std::abs(x - 3.0) <= 1e-6 && std::abs(y - 3.0) <= 1e-6;
    return std::pair{ok, "audit X " + fmt(x) + ", audit Y " + fmt(y)};
  }));

  return out;
}

}  // namespace odist
