#include "odist/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <span>

#include "odist/lp.hpp"
#include "odist/social_choice.hpp"

namespace odist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this, the homogenizing variable is treated as zero and the witness
// is built as a limit along the recession direction.
constexpr double kTinyScale = 1e-12;
// Recession-direction witnesses are pushed this far out, relative to the
// other magnitudes involved, so their ratio is within ~1e-9 of the limit.
constexpr double kFarOut = 1e9;

// Rows of the consistency set restricted to agent `only` (or all agents).
// With `t`, the right-hand sides l are homogenized to l*t.
template <class VarOf>
void add_consistency_rows(lp::LinearProgram& prog, const ConsistencyConstraintSet& cs, std::optional<AgentIdx> only,
                          VarOf var, std::optional<std::size_t> t) {
  using lp::Sense;
  const auto chains = only ? cs.chains_of(*only) : std::span(cs.chains());
  const auto pairs = only ? cs.pairs_of(*only) : std::span(cs.pairs());
  for (const auto& c : chains)
    prog.add_constraint({{var(c.agent, c.closer), 1.0}, {var(c.agent, c.farther), -1.0}}, Sense::LessEqual, 0.0);
  for (const auto& p : pairs) {
    const std::size_t a = var(p.agent, p.a), b = var(p.agent, p.b);
    auto row = [&](std::vector<lp::Term> terms, Sense sense) {
      if (t) {
        terms.push_back({*t, -p.distance});
        prog.add_constraint(std::move(terms), sense, 0.0);
      } else {
        prog.add_constraint(std::move(terms), sense, p.distance);
      }
    };
    if (p.kind == PairConstraint::Kind::DifferenceAtMost) {
      row({{a, 1.0}, {b, -1.0}}, Sense::LessEqual);
      row({{b, 1.0}, {a, -1.0}}, Sense::LessEqual);
    } else {
      row({{a, 1.0}, {b, 1.0}}, Sense::GreaterEqual);
    }
  }
}

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInf : 1.0;
}

// A row with every distance equal is consistent once it reaches max l / 2.
double constant_row_level(const FacilityDistances& l) { return std::max(1.0, l.max_distance()); }

double column_objective(const Matrix& d, FacilityIdx f, AuditObjective objective, double alpha) {
  std::vector<double> col(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) col[i] = d(i, f);
  switch (objective) {
    case AuditObjective::Sum:
      return std::accumulate(col.begin(), col.end(), 0.0);
    case AuditObjective::Max:
      return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
    case AuditObjective::Percentile:
      return percentile_value(col, alpha);
  }
  return 0.0;
}

double social_choice_ratio_matrix(FacilityIdx w, const Matrix& d, AuditObjective objective, double alpha) {
  double best = kInf;
  for (FacilityIdx x = 0; x < d.cols(); ++x) best = std::min(best, column_objective(d, x, objective, alpha));
  return safe_ratio(column_objective(d, w, objective, alpha), best);
}

double assignment_ratio_matrix(const Assignment& x, const Matrix& d, const AssignmentProblem& problem) {
  const double cost = total_cost(x, d, problem.cost());
  const double best = minimize_assignment(problem, d, Execution::Serial).cost;
  return safe_ratio(cost, best);
}

Matrix constant_rows(std::size_t n, std::size_t m, double level) { return Matrix(n, m, level); }

void finish_witness(AuditReport& report, const PreferenceProfile& profile, Matrix witness, double ratio) {
  for (std::size_t i = 0; i < witness.rows(); ++i)
    for (double& v : witness.row(i)) v = std::max(v, 0.0);
  report.witness_has_ties = has_preference_ties(profile, witness);
  report.witness_ratio = ratio;
  report.witness = std::move(witness);
}

// One homogenized program comparing cost(x) against cost(x') for the sum
// distance cost: maximize sum_i y(i,x(i)) + C t subject to y in t * D and
// sum_i y(i,x'(i)) + C' t = 1.
struct PairOutcome {
  double value = 1.0;
  std::vector<double> y;
  double t = 0.0;
  bool unbounded = false;
};

// `weight` (empty = all ones) counts how many agents each row stands for.
PairOutcome solve_sum_pair(const ConsistencyConstraintSet& cs, const Assignment& x, double cx,
                           const Assignment& alt, double calt, std::span<const double> weight = {}) {
  const std::size_t n = cs.num_agents(), m = cs.num_facilities();
  auto wt = [&](AgentIdx i) { return weight.empty() ? 1.0 : weight[i]; };
  lp::LinearProgram prog(n * m);
  const std::size_t t = prog.add_variable(cx);
  auto var = [&](AgentIdx i, FacilityIdx f) { return i * m + f; };
  add_consistency_rows(prog, cs, std::nullopt, var, t);
  std::vector<lp::Term> norm;
  for (AgentIdx i = 0; i < n; ++i) {
    prog.add_to_objective(var(i, x[i]), wt(i));
    norm.push_back({var(i, alt[i]), wt(i)});
  }
  if (calt != 0.0) norm.push_back({t, calt});
  prog.add_constraint(norm, lp::Sense::Equal, 1.0);
  const auto sol = lp::maximize(prog);
  PairOutcome out;
  if (sol.status == lp::Status::Unbounded) {
    out.value = kInf;
    out.unbounded = true;
    return out;
  }
  if (sol.status == lp::Status::Infeasible) {
    // cost(x') vanishes on the whole set; the ratio is infinite unless
    // cost(x) vanishes too.
    lp::LinearProgram probe(n * m);
    const std::size_t tp = probe.add_variable(cx);
    add_consistency_rows(probe, cs, std::nullopt, var, tp);
    std::vector<lp::Term> cap;
    for (AgentIdx i = 0; i < n; ++i) {
      probe.add_to_objective(var(i, x[i]), wt(i));
      cap.push_back({var(i, x[i]), wt(i)});
    }
    cap.push_back({tp, cx});
    probe.add_constraint(cap, lp::Sense::LessEqual, 1.0);
    const auto p = lp::maximize(probe);
    if (p.status != lp::Status::Optimal) throw InternalError("bounded probe program did not solve");
    out.value = p.value > 1e-9 ? kInf : 1.0;
    out.unbounded = out.value == kInf;
    return out;
  }
  out.value = sol.value;
  out.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n * m));
  out.t = sol.x[t];
  return out;
}

// Max distance cost: sup (d(j,x(j)) + C) / (max_i d(i,x'(i)) + C') for a fixed
// j is the maximum of y(j,x(j)) + C t over y in t * D with every
// y(i,x'(i)) + C' t <= 1.
PairOutcome solve_max_pair(const ConsistencyConstraintSet& cs, const Assignment& x, double cx, const Assignment& alt,
                           double calt) {
  const std::size_t n = cs.num_agents(), m = cs.num_facilities();
  auto var = [&](AgentIdx i, FacilityIdx f) { return i * m + f; };
  PairOutcome best;
  best.value = -kInf;
  for (AgentIdx j = 0; j < n; ++j) {
    lp::LinearProgram prog(n * m);
    const std::size_t t = prog.add_variable(cx);
    add_consistency_rows(prog, cs, std::nullopt, var, t);
    for (AgentIdx i = 0; i < n; ++i) {
      std::vector<lp::Term> row{{var(i, alt[i]), 1.0}};
      if (calt != 0.0) row.push_back({t, calt});
      prog.add_constraint(row, lp::Sense::LessEqual, 1.0);
    }
    prog.add_to_objective(var(j, x[j]), 1.0);
    const auto sol = lp::maximize(prog);
    if (sol.status == lp::Status::Unbounded) {
      PairOutcome out;
      out.value = kInf;
      out.unbounded = true;
      return out;
    }
    if (sol.status != lp::Status::Optimal) throw InternalError("max-cost audit program is infeasible");
    if (sol.value > best.value) {
      best.value = sol.value;
      best.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n * m));
      best.t = sol.x[t];
    }
  }
  if (n == 0) best.value = 1.0;
  return best;
}

// Turns a homogenized optimum into a metric: y / t, or a point far along
// the recession direction y when t vanishes.
Matrix witness_from(const PairOutcome& p, std::size_t n, std::size_t m, double base_level, double extra_scale) {
  Matrix d(n, m);
  if (p.t > kTinyScale) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t f = 0; f < m; ++f) d(i, f) = p.y[i * m + f] / p.t;
    return d;
  }
  const double s = kFarOut * std::max({1.0, base_level, extra_scale});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < m; ++f) d(i, f) = base_level + s * p.y[i * m + f];
  return d;
}

template <class Fn>
void run_indexed(std::size_t count, Execution exec, Fn&& fn) {
  if (exec == Execution::Serial) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) fn(static_cast<std::size_t>(k));
}

void check_inputs(const PreferenceProfile& profile, const FacilityDistances& l) {
  if (profile.num_facilities() != l.size()) {
    throw InputError("profile ranks " + std::to_string(profile.num_facilities()) + " facilities but l is " +
                     std::to_string(l.size()) + "x" + std::to_string(l.size()));
  }
}

}  // namespace

std::string_view to_string(AuditObjective o) {
  switch (o) {
    case AuditObjective::Sum:
      return "sum";
    case AuditObjective::Max:
      return "max";
    case AuditObjective::Percentile:
      return "percentile";
  }
  return "unknown";
}

bool has_preference_ties(const PreferenceProfile& profile, const Matrix& d, double tol) {
  const double eps = tol * std::max(1.0, d.max_abs());
  for (AgentIdx i = 0; i < profile.num_agents(); ++i) {
    auto r = profile.ranking(i);
    if (profile.is_top_only()) {
      for (FacilityIdx f = 0; f < d.cols(); ++f)
        if (f != r[0] && std::abs(d(i, f) - d(i, r[0])) <= eps) return true;
      continue;
    }
    for (std::size_t k = 0; k + 1 < r.size(); ++k)
      if (d(i, r[k + 1]) - d(i, r[k]) <= eps) return true;
  }
  return false;
}

double social_choice_ratio(FacilityIdx w, const FullMetric& d, AuditObjective objective, double alpha) {
  return social_choice_ratio_matrix(w, d.agent_facility(), objective, alpha);
}

double assignment_ratio(const Assignment& x, const FullMetric& d, const AssignmentProblem& problem) {
  return assignment_ratio_matrix(x, d.agent_facility(), problem);
}

AuditReport audit_sum_social_choice(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l,
                                    Execution exec) {
  check_inputs(profile, l);
  const std::size_t n = profile.num_agents(), m = l.size();
  if (w >= m) throw InputError("audited facility is out of range");
  // Agents sharing a ranking are interchangeable, and averaging an optimum
  // over them keeps it optimal, so one weighted row per ranking suffices.
  std::map<std::vector<FacilityIdx>, std::size_t> class_of;
  std::vector<std::size_t> cls(n);
  std::vector<std::vector<FacilityIdx>> reps;
  std::vector<double> weight;
  for (AgentIdx i = 0; i < n; ++i) {
    const auto& r = profile.rankings()[i];
    auto [it, added] = class_of.try_emplace(r, reps.size());
    if (added) {
      reps.push_back(r);
      weight.push_back(0.0);
    }
    cls[i] = it->second;
    weight[it->second] += 1.0;
  }
  const auto reduced = profile.is_top_only()
                           ? PreferenceProfile::top_only(m, [&] {
                               std::vector<FacilityIdx> tops;
                               for (const auto& r : reps) tops.push_back(r.front());
                               return tops;
                             }())
                           : PreferenceProfile::full(m, reps);
  const std::size_t g = reps.size();
  const auto cs = consistency_constraints(reduced, l);
  const Assignment x(g, w);
  std::vector<PairOutcome> results(m);
  run_indexed(m, exec, [&](std::size_t alt) {
    if (alt == w) return;
    results[alt] = solve_sum_pair(cs, x, 0.0, Assignment(g, alt), 0.0, weight);
  });

  AuditReport report;
  report.objective = AuditObjective::Sum;
  report.distortion = 1.0;
  std::optional<std::size_t> arg;
  for (FacilityIdx alt = 0; alt < m; ++alt) {
    report.breakdown.push_back({alt, {}, alt == w ? 1.0 : results[alt].value});
    if (alt != w && results[alt].value > report.distortion) {
      report.distortion = results[alt].value;
      arg = alt;
    }
  }
  if (std::isinf(report.distortion)) return report;
  const double level = constant_row_level(l);
  Matrix witness = constant_rows(n, m, level);
  if (arg) {
    const Matrix per_class = witness_from(results[*arg], g, m, level, static_cast<double>(n) * level);
    for (AgentIdx i = 0; i < n; ++i)
      for (FacilityIdx f = 0; f < m; ++f) witness(i, f) = per_class(cls[i], f);
  }
  const double ratio = social_choice_ratio_matrix(w, witness, AuditObjective::Sum, 0.5);
  finish_witness(report, profile, std::move(witness), ratio);
  return report;
}

AuditReport audit_additive_assignment(const Assignment& x, const PreferenceProfile& profile,
                                      const FacilityDistances& l, const AssignmentProblem& problem, Execution exec) {
  check_inputs(profile, l);
  const std::size_t n = profile.num_agents(), m = l.size();
  if (problem.num_agents() != n || problem.num_facilities() != m) {
    throw InputError("problem dimensions disagree with the profile");
  }
  if (x.size() != n || !problem.is_valid(x)) throw InputError("audited assignment is not valid for the problem");
  if (problem.search_space() > kMaxSearchSpace) {
    throw SearchSpaceTooLarge("alternative enumeration over " + std::to_string(m) + "^" + std::to_string(n) +
                              " assignments exceeds the limit");
  }
  const auto alternatives = valid_assignments(problem, kMaxAuditAlternatives);
  const auto cs = consistency_constraints(profile, l);
  const CostSpec& spec = problem.cost();
  const double cx = facility_cost(x, spec);
  std::vector<PairOutcome> results(alternatives.size());
  run_indexed(alternatives.size(), exec, [&](std::size_t k) {
    const auto& alt = alternatives[k];
    if (alt == x) return;
    const double calt = facility_cost(alt, spec);
    results[k] = spec.distance_cost == DistanceCost::Sum ? solve_sum_pair(cs, x, cx, alt, calt)
                                                          : solve_max_pair(cs, x, cx, alt, calt);
  });

  AuditReport report;
  report.objective = spec.distance_cost == DistanceCost::Sum ? AuditObjective::Sum : AuditObjective::Max;
  std::optional<std::size_t> arg;
  for (std::size_t k = 0; k < alternatives.size(); ++k) {
    const double v = alternatives[k] == x ? 1.0 : results[k].value;
    report.breakdown.push_back({std::nullopt, alternatives[k], v});
    if (v > report.distortion) {
      report.distortion = v;
      arg = k;
    }
  }
  if (std::isinf(report.distortion)) return report;
  const double level = constant_row_level(l);
  double cost_scale = 0.0;
  for (double c : spec.opening_costs) cost_scale += c;
  for (const auto& p : spec.penalties) cost_scale += p.penalty;
  Matrix witness = arg ? witness_from(results[*arg], n, m, level, static_cast<double>(n) * level + cost_scale)
                       : constant_rows(n, m, level);
  const double ratio = assignment_ratio_matrix(x, witness, problem);
  finish_witness(report, profile, std::move(witness), ratio);
  return report;
}

namespace {

// min d(i, X) over agent i's polytope, with a minimizing row.
std::pair<double, std::vector<double>> agent_minimum(const ConsistencyConstraintSet& cs, AgentIdx i, FacilityIdx x) {
  const std::size_t m = cs.num_facilities();
  lp::LinearProgram prog(m);
  add_consistency_rows(prog, cs, i, [](AgentIdx, FacilityIdx f) { return f; }, std::nullopt);
  prog.set_objective(x, -1.0);
  const auto sol = lp::maximize(prog);
  if (sol.status != lp::Status::Optimal) throw InternalError("agent polytope is empty or unbounded below");
  return {-sol.value, sol.x};
}

struct PercentileTask {
  FacilityIdx alt;
  AgentIdx agent;    // the agent counted both below the X threshold and above the W one
  double u_lo;       // (k-1)-th smallest minimum of d(., X) over the other agents
};

}  // namespace

AuditReport audit_percentile_social_choice(FacilityIdx w, const PreferenceProfile& profile,
                                           const FacilityDistances& l, double alpha, Execution exec) {
  check_inputs(profile, l);
  if (!(alpha >= 0.5 && alpha <= 1.0)) {
    throw InputError("percentile audits need 1/2 <= alpha <= 1; below 1/2 the distortion of every "
                     "deterministic rule is unbounded");
  }
  const std::size_t n = profile.num_agents(), m = l.size();
  if (w >= m) throw InputError("audited facility is out of range");
  if (n == 0) throw InputError("percentile audit needs at least one agent");
  const std::size_t k = percentile_rank(n, alpha);
  const auto cs = consistency_constraints(profile, l);

  // Per-agent minima of d(., X); identical rankings share one program.
  std::vector<std::vector<double>> min_value(m, std::vector<double>(n));
  std::vector<std::vector<std::vector<double>>> min_point(m, std::vector<std::vector<double>>(n));
  std::map<std::vector<FacilityIdx>, AgentIdx> representative;
  std::vector<AgentIdx> rep_of(n);
  for (AgentIdx i = 0; i < n; ++i) {
    auto r = profile.ranking(i);
    rep_of[i] = representative.try_emplace({r.begin(), r.end()}, i).first->second;
  }
  std::vector<AgentIdx> reps;
  for (auto& [r, i] : representative) reps.push_back(i);
  run_indexed(reps.size() * m, exec, [&](std::size_t task) {
    const AgentIdx i = reps[task / m];
    const FacilityIdx x = task % m;
    if (x == w) return;
    auto [v, pt] = agent_minimum(cs, i, x);
    min_value[x][i] = v;
    min_point[x][i] = std::move(pt);
  });
  for (FacilityIdx x = 0; x < m; ++x) {
    if (x == w) continue;
    for (AgentIdx i = 0; i < n; ++i) {
      min_value[x][i] = min_value[x][rep_of[i]];
      min_point[x][i] = min_point[x][rep_of[i]];
    }
  }

  // For each X, every agent a; agents with equal ranking and equal u_lo give
  // identical programs.
  std::vector<PercentileTask> tasks;
  for (FacilityIdx x = 0; x < m; ++x) {
    if (x == w) continue;
    std::vector<double> sorted = min_value[x];
    std::sort(sorted.begin(), sorted.end());
    std::map<std::pair<AgentIdx, double>, bool> seen;
    for (AgentIdx a = 0; a < n; ++a) {
      double u_lo = 0.0;
      if (k > 1) {
        // (k-1)-th smallest over agents other than a.
        const double own = min_value[x][a];
        const std::size_t pos = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), own) -
                                                         sorted.begin());
        u_lo = (k - 1 <= pos) ? sorted[k - 2] : sorted[k - 1];
      }
      if (seen.emplace(std::make_pair(rep_of[a], u_lo), true).second) tasks.push_back({x, a, u_lo});
    }
  }

  std::vector<PairOutcome> results(tasks.size());
  run_indexed(tasks.size(), exec, [&](std::size_t idx) {
    const auto& task = tasks[idx];
    lp::LinearProgram prog(m);
    const std::size_t t = prog.add_variable(0.0);
    add_consistency_rows(prog, cs, task.agent, [](AgentIdx, FacilityIdx f) { return f; }, t);
    prog.add_constraint({{task.alt, 1.0}}, lp::Sense::LessEqual, 1.0);
    if (task.u_lo > 0.0) prog.add_constraint({{t, task.u_lo}}, lp::Sense::LessEqual, 1.0);
    prog.set_objective(w, 1.0);
    const auto sol = lp::maximize(prog);
    PairOutcome out;
    if (sol.status == lp::Status::Unbounded) {
      out.value = kInf;
      out.unbounded = true;
    } else if (sol.status == lp::Status::Optimal) {
      out.value = sol.value;
      out.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
      out.t = sol.x[t];
    } else {
      throw InternalError("percentile audit program is infeasible");
    }
    results[idx] = std::move(out);
  });

  AuditReport report;
  report.objective = AuditObjective::Percentile;
  report.alpha = alpha;
  std::vector<double> per_alt(m, -kInf);
  std::optional<std::size_t> arg;
  per_alt[w] = 1.0;
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const FacilityIdx x = tasks[idx].alt;
    per_alt[x] = std::max(per_alt[x], results[idx].value);
    if (results[idx].value > report.distortion) {
      report.distortion = results[idx].value;
      arg = idx;
    }
  }
  for (FacilityIdx x = 0; x < m; ++x) report.breakdown.push_back({x, {}, per_alt[x]});
  if (std::isinf(report.distortion)) return report;

  const double level = constant_row_level(l);
  Matrix witness = constant_rows(n, m, level);
  if (arg) {
    const auto& task = tasks[*arg];
    const auto& best = results[*arg];
    const FacilityIdx x = task.alt;
    std::vector<double> row(m);
    if (best.t > kTinyScale) {
      for (FacilityIdx f = 0; f < m; ++f) row[f] = best.y[f] / best.t;
    } else {
      const double s = kFarOut * std::max({1.0, level, task.u_lo});
      for (FacilityIdx f = 0; f < m; ++f) row[f] = level + s * best.y[f];
    }
    // The k-1 other agents with the smallest minima sit at their minimizers;
    // everyone else is shifted beyond d(a, W).
    std::vector<AgentIdx> others;
    for (AgentIdx i = 0; i < n; ++i)
      if (i != task.agent) others.push_back(i);
    std::stable_sort(others.begin(), others.end(),
                     [&](AgentIdx p, AgentIdx q) { return min_value[x][p] < min_value[x][q]; });
    for (FacilityIdx f = 0; f < m; ++f) witness(task.agent, f) = row[f];
    for (std::size_t r = 0; r < others.size(); ++r) {
      const AgentIdx i = others[r];
      const auto& pt = min_point[x][i];
      double shift = 0.0;
      if (r + 1 >= k) shift = row[w] + 1.0 + *std::max_element(pt.begin(), pt.end());
      for (FacilityIdx f = 0; f < m; ++f) witness(i, f) = pt[f] + shift;
    }
  }
  const double ratio = social_choice_ratio_matrix(w, witness, AuditObjective::Percentile, alpha);
  finish_witness(report, profile, std::move(witness), ratio);
  return report;
}

FullMetric sample_consistent_metric(const PreferenceProfile& profile, const FacilityDistances& l,
                                    std::mt19937_64& rng) {
  check_inputs(profile, l);
  const std::size_t n = profile.num_agents(), m = l.size();
  const auto cs = consistency_constraints(profile, l);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> box_factor(0.5, 3.0);
  std::bernoulli_distribution mix(0.5);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  const double scale = std::max(1.0, l.max_distance());
  auto vertex = [&](AgentIdx i, double box) {
    lp::LinearProgram prog(m);
    add_consistency_rows(prog, cs, i, [](AgentIdx, FacilityIdx f) { return f; }, std::nullopt);
    for (FacilityIdx f = 0; f < m; ++f) {
      prog.set_objective(f, unit(rng));
      prog.add_constraint({{f, 1.0}}, lp::Sense::LessEqual, box);
    }
    const auto sol = lp::maximize(prog);
    if (sol.status != lp::Status::Optimal) throw InternalError("consistent polytope is empty");
    return sol.x;
  };
  Matrix d(n, m);
  for (AgentIdx i = 0; i < n; ++i) {
    const double box = scale * box_factor(rng);
    auto row = vertex(i, box);
    if (mix(rng)) {
      const auto other = vertex(i, box);
      const double lam = weight(rng);
      for (FacilityIdx f = 0; f < m; ++f) row[f] = lam * row[f] + (1.0 - lam) * other[f];
    }
    for (FacilityIdx f = 0; f < m; ++f) d(i, f) = std::max(0.0, row[f]);
  }
  return FullMetric(std::move(d), l, 1e-7);
}

FullMetric sample_consistent_metric(const PreferenceProfile& profile, const FacilityDistances& l,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_consistent_metric(profile, l, rng);
}

AuditReport sample_percentile_social_choice(FacilityIdx w, const PreferenceProfile& profile,
                                            const FacilityDistances& l, double alpha, std::size_t samples,
                                            std::uint64_t seed) {
  check_inputs(profile, l);
  if (!(alpha >= 0.5 && alpha <= 1.0)) {
    throw InputError("percentile audits need 1/2 <= alpha <= 1; below 1/2 the distortion of every "
                     "deterministic rule is unbounded");
  }
  if (w >= l.size()) throw InputError("audited facility is out of range");
  AuditReport report;
  report.objective = AuditObjective::Percentile;
  report.alpha = alpha;
  report.exact = false;
  report.samples = samples;
  report.seed = seed;
  report.distortion = 0.0;
  std::mt19937_64 rng(seed);
  std::optional<Matrix> best;
  for (std::size_t s = 0; s < samples; ++s) {
    const FullMetric d = sample_consistent_metric(profile, l, rng);
    const double r = social_choice_ratio(w, d, AuditObjective::Percentile, alpha);
    if (!best || r > report.distortion) {
      report.distortion = r;
      best = d.agent_facility();
    }
  }
  if (!best) {
    report.distortion = 1.0;
    best = constant_rows(profile.num_agents(), l.size(), constant_row_level(l));
  }
  const double ratio = social_choice_ratio_matrix(w, *best, AuditObjective::Percentile, alpha);
  finish_witness(report, profile, std::move(*best), ratio);
  return report;
}

}  // namespace odist
