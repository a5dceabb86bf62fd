#include "odist/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "odist/audit.hpp"
#include "odist/generators.hpp"
#include "odist/instance_io.hpp"
#include "odist/reduction.hpp"
#include "odist/repro.hpp"
#include "odist/social_choice.hpp"

namespace odist {

namespace {

struct SolveArgs {
  std::string instance;
  std::string mechanism;
  std::string out;
  bool no_audit = false;
};

struct AuditArgs {
  std::string instance;
  std::string outcome;
  std::string objective = "sum";
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct GenArgs {
  std::string example;
  std::string params;
  std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

int do_solve(const SolveArgs& a, std::ostream& out) {
  const Instance in = load_instance(a.instance);
  SolveReport r;
  r.mechanism = a.mechanism;
  if (a.mechanism == "alg1") {
    const auto sc = sum_winner(project_agents(in.preferences, in.distances()));
    r.outcome.facility = sc.winner;
    r.social_choice = sc;
    r.guarantee_objective = "sum";
    r.guarantee = 3.0;
    if (!a.no_audit) r.audit = audit_sum_social_choice(sc.winner, in.preferences, in.distances());
  } else if (a.mechanism == "alg2") {
    const auto sc = median_winner(in.preferences, in.partial_order());
    r.outcome.facility = sc.winner;
    r.social_choice = sc;
    r.guarantee_objective = "percentile(1/2 <= alpha <= 1)";
    r.guarantee = 3.0;
    if (!a.no_audit) {
      if (in.facility_distances) {
        r.audit = audit_percentile_social_choice(sc.winner, in.preferences, in.distances(), 0.5);
      } else {
        r.audit_note = "ordinal-only instance: no numeric facility distances to audit against";
      }
    }
  } else if (a.mechanism == "copeland") {
    const auto sc = copeland_winner(in.preferences);
    r.outcome.facility = sc.winner;
    r.social_choice = sc;
    r.guarantee_objective = "none";
    if (!a.no_audit && in.facility_distances) {
      r.audit = audit_sum_social_choice(sc.winner, in.preferences, in.distances());
    }
  } else if (a.mechanism.rfind("reduce:", 0) == 0) {
    const SolverKind kind = parse_solver(a.mechanism.substr(7));
    const auto red = reduce_and_solve(in.problem, in.preferences, in.distances(), kind);
    r.outcome.assignment = red.assignment;
    r.solver = red.solver;
    r.guarantee_objective = "cost";
    r.guarantee = red.guarantee;
    if (!a.no_audit) {
      try {
        const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
        r.audit = audit_additive_assignment(red.assignment, in.preferences, in.distances(), problem);
      } catch (const SearchSpaceTooLarge& e) {
        r.audit_note = e.what();
      }
    }
  } else {
    throw CLI::ValidationError("--mechanism", "expected alg1, alg2, copeland or reduce:<solver>");
  }
  emit(a.out, serialize_solve_report(in, r), out);
  return kExitOk;
}

Outcome parse_outcome(const std::string& text, const Instance& in) {
  if (std::filesystem::is_regular_file(text)) return parse_report_outcome(read_text(text), in);
  if (text.find(',') == std::string::npos) {
    Outcome o;
    o.facility = in.facilities.index_of(text);
    return o;
  }
  Outcome o;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string name = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    o.assignment.push_back(in.facilities.index_of(name));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (o.assignment.size() != in.num_agents()) {
    throw InputError("--outcome lists " + std::to_string(o.assignment.size()) + " facilities for " +
                     std::to_string(in.num_agents()) + " agents");
  }
  return o;
}

int do_audit(const AuditArgs& a, std::ostream& out) {
  const Instance in = load_instance(a.instance);
  Outcome o = parse_outcome(a.outcome, in);
  const auto& l = in.distances();
  AuditReport report;
  std::optional<double> alpha;
  if (a.objective == "median") {
    alpha = 0.5;
  } else if (a.objective.rfind("percentile:", 0) == 0) {
    const std::string v = a.objective.substr(11);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw InputError("--objective percentile:<alpha> needs a number, got '" + v + "'");
    }
    alpha = x;
  } else if (a.objective != "sum" && a.objective != "cost") {
    throw InputError("--objective must be sum, median, percentile:<alpha> or cost");
  }
  if (a.samples > 0 && !a.seed) throw InputError("--samples needs an explicit --seed");

  if (alpha) {
    if (!o.facility) throw InputError("percentile objectives audit a single facility, not an assignment");
    report = a.samples > 0 ? sample_percentile_social_choice(*o.facility, in.preferences, l, *alpha, a.samples, *a.seed)
                           : audit_percentile_social_choice(*o.facility, in.preferences, l, *alpha);
  } else if (a.objective == "sum" && o.facility) {
    report = audit_sum_social_choice(*o.facility, in.preferences, l);
  } else {
    if (in.problem.preset == Preset::SocialChoiceMedian) {
      throw UnsupportedCost("social_choice_median has no additive cost; use --objective median");
    }
    const auto problem = build_problem(in.problem, in.num_agents(), in.num_facilities());
    if (a.objective == "sum" && problem.cost().distance_cost != DistanceCost::Sum) {
      throw InputError("the instance's problem uses the max distance cost; use --objective cost");
    }
    if (o.facility) {
      o.assignment.assign(in.num_agents(), *o.facility);
      o.facility.reset();
    }
    report = audit_additive_assignment(o.assignment, in.preferences, l, problem);
  }
  emit(a.out, serialize_audit_report(in, o, report), out);
  return kExitOk;
}

int do_gen(const GenArgs& a, std::ostream& out) {
  const Instance in = gen_paper_example(a.example, parse_params(a.params));
  emit(a.out, serialize_instance(in), out);
  return kExitOk;
}

int do_repro(std::ostream& out) {
  bool all = true;
  for (const auto& c : run_repro()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all = all && c.passed;
  }
  return all ? kExitOk : kExitAssertion;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ordinal facility assignment with known facility locations: mechanisms and distortion audits",
               "odist"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run a mechanism and write a report");
  s->add_option("--instance", solve.instance, "Instance JSON file")->required();
  s->add_option("--mechanism", solve.mechanism,
                "alg1 | alg2 | copeland | reduce:<solver> with solver one of brute_force, min_cost_matching, "
                "bottleneck_matching, k_center_greedy, k_median, facility_location")
      ->required();
  s->add_option("--out", solve.out, "Report path (default: stdout)");
  s->add_flag("--no-audit", solve.no_audit, "Skip the distortion audit");

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Worst-case distortion of an outcome");
  au->add_option("--instance", audit.instance, "Instance JSON file")->required();
  au->add_option("--outcome", audit.outcome, "Report file, facility name, or comma-separated assignment")
      ->required();
  au->add_option("--objective", audit.objective, "sum | median | percentile:<alpha> | cost");
  au->add_option("--samples", audit.samples, "Sampled lower bound with this many metrics (percentile only)");
  au->add_option("--seed", audit.seed, "Seed for sampling (required with --samples)");
  au->add_option("--out", audit.out, "Report path (default: stdout)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a worked example as an instance file");
  std::string names;
  for (const auto& name : paper_example_names()) names += (names.empty() ? "" : ", ") + name;
  g->add_option("--example", gen.example, "Example name: " + names)->required();
  g->add_option("--params", gen.params, "Comma-separated key=value list, e.g. q=1000,eps=1e-4");
  g->add_option("--out", gen.out, "Instance path (default: stdout)");

  bool all = false;
  auto* r = app.add_subcommand("repro", "Regenerate every worked example and check its numbers");
  r->add_flag("--all", all, "Run every check")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return do_solve(solve, out);
    if (au->parsed()) return do_audit(audit, out);
    if (g->parsed()) return do_gen(gen, out);
    if (r->parsed()) return do_repro(out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitUsage;
}

}  // namespace odist
