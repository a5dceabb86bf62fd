#include "odist/assignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace odist {

DistanceCost parse_distance_cost(std::string_view name) {
  if (name == "sum") return DistanceCost::Sum;
  if (name == "max") return DistanceCost::Max;
  if (name == "median") {
    throw UnsupportedCost("the median distance cost is not subadditive and has no bounded-distortion reduction");
  }
  throw UnsupportedCost("unknown distance cost '" + std::string(name) + "'");
}

std::string_view to_string(DistanceCost c) { return c == DistanceCost::Sum ? "sum" : "max"; }

double distance_cost(DistanceCost c, std::span<const double> s) {
  if (c == DistanceCost::Sum) return std::accumulate(s.begin(), s.end(), 0.0);
  double best = 0.0;
  for (double v : s) best = std::max(best, v);
  return best;
}

double facility_cost(const Assignment& x, const CostSpec& spec) {
  double total = 0.0;
  if (!spec.opening_costs.empty()) {
    std::vector<char> open(spec.opening_costs.size(), 0);
    for (FacilityIdx f : x) open.at(f) = 1;
    for (std::size_t f = 0; f < open.size(); ++f)
      if (open[f]) total += spec.opening_costs[f];
  }
  for (const auto& p : spec.penalties)
    if (x.at(p.a) == x.at(p.b)) total += p.penalty;
  return total;
}

bool is_valid(const Assignment& x, const ConstraintSet& c, std::size_t num_facilities) {
  std::vector<std::size_t> load(num_facilities, 0);
  for (FacilityIdx f : x) {
    if (f >= num_facilities) return false;
    ++load[f];
  }
  if (!c.capacities.empty()) {
    for (std::size_t f = 0; f < num_facilities; ++f)
      if (load[f] > c.capacities[f]) return false;
  }
  const auto open = static_cast<std::size_t>(std::count_if(load.begin(), load.end(), [](auto v) { return v > 0; }));
  if (open < c.min_open) return false;
  if (c.max_open && open > *c.max_open) return false;
  for (auto [a, b] : c.together)
    if (a >= x.size() || b >= x.size() || x[a] != x[b]) return false;
  for (auto [a, b] : c.apart)
    if (a >= x.size() || b >= x.size() || x[a] == x[b]) return false;
  return true;
}

AssignmentProblem::AssignmentProblem(std::size_t num_agents, std::size_t num_facilities, ConstraintSet constraints,
                                     CostSpec cost)
    : n_(num_agents), m_(num_facilities), constraints_(std::move(constraints)), cost_(std::move(cost)) {
  if (m_ == 0) throw InputError("assignment problem needs at least one facility");
  if (!constraints_.capacities.empty() && constraints_.capacities.size() != m_) {
    throw InputError("capacities must list one bound per facility");
  }
  if (!cost_.opening_costs.empty() && cost_.opening_costs.size() != m_) {
    throw InputError("opening costs must list one value per facility");
  }
  for (double c : cost_.opening_costs)
    if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("opening costs must be finite and nonnegative");
  for (const auto& p : cost_.penalties) {
    if (p.a >= n_ || p.b >= n_ || p.a == p.b) throw InputError("penalty refers to an unknown agent pair");
    if (!(p.penalty >= 0.0) || !std::isfinite(p.penalty)) throw InputError("penalties must be finite and nonnegative");
  }
  for (const auto* list : {&constraints_.together, &constraints_.apart})
    for (auto [a, b] : *list)
      if (a >= n_ || b >= n_ || a == b) throw InputError("pair constraint refers to an unknown agent pair");
  if (constraints_.max_open && *constraints_.max_open < constraints_.min_open) {
    throw InputError("max_open is below min_open");
  }
  if (search_space() <= kMaxSearchSpace) {
    bool found = false;
    try {
      for_each_valid_assignment(*this, [&](const Assignment&) {
        found = true;
        throw std::nullopt;  // stop at the first hit
      });
    } catch (const std::nullopt_t&) {
    }
    if (!found) throw InputError("no assignment satisfies the constraints");
  }
}

std::uint64_t AssignmentProblem::search_space() const {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / m_) return std::numeric_limits<std::uint64_t>::max();
    total *= m_;
  }
  return total;
}

std::vector<double> distance_vector(const Assignment& x, const Matrix& dist) {
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = dist(i, x[i]);
  return s;
}

double total_cost(const Assignment& x, const Matrix& dist, const CostSpec& spec) {
  const auto s = distance_vector(x, dist);
  return distance_cost(spec.distance_cost, s) + facility_cost(x, spec);
}

double total_cost(const Assignment& x, const FullMetric& d, const CostSpec& spec) {
  return total_cost(x, d.agent_facility(), spec);
}

namespace {

// Depth-first enumeration of valid assignments in lexicographic order with
// pruning on partial assignments.
class Enumerator {
 public:
  explicit Enumerator(const AssignmentProblem& p)
      : p_(p), n_(p.num_agents()), m_(p.num_facilities()), with_(n_), without_(n_) {
    for (auto [a, b] : p.constraints().together) with_[std::max(a, b)].push_back(std::min(a, b));
    for (auto [a, b] : p.constraints().apart) without_[std::max(a, b)].push_back(std::min(a, b));
  }

  struct State {
    Assignment x;
    std::vector<std::size_t> load;
    std::size_t open = 0;
  };

  State root() const { return State{Assignment(n_, 0), std::vector<std::size_t>(m_, 0), 0}; }

  bool can_place(const State& s, AgentIdx j, FacilityIdx f) const {
    const auto& c = p_.constraints();
    if (!c.capacities.empty() && s.load[f] >= c.capacities[f]) return false;
    const std::size_t open = s.open + (s.load[f] == 0 ? 1 : 0);
    if (c.max_open && open > *c.max_open) return false;
    if (open + (n_ - j - 1) < c.min_open) return false;
    for (AgentIdx o : with_[j])
      if (s.x[o] != f) return false;
    for (AgentIdx o : without_[j])
      if (s.x[o] == f) return false;
    return true;
  }

  void place(State& s, AgentIdx j, FacilityIdx f) const {
    s.x[j] = f;
    if (s.load[f]++ == 0) ++s.open;
  }
  void unplace(State& s, AgentIdx j) const {
    if (--s.load[s.x[j]] == 0) --s.open;
  }

  template <class Visit>
  void run(State& s, AgentIdx j, Visit& visit) const {
    if (j == n_) {
      visit(s.x);
      return;
    }
    for (FacilityIdx f = 0; f < m_; ++f) {
      if (!can_place(s, j, f)) continue;
      place(s, j, f);
      run(s, j + 1, visit);
      unplace(s, j);
    }
  }

  /// Valid partial assignments of the first `depth` agents, lexicographic.
  std::vector<State> prefixes(std::size_t depth) const {
    std::vector<State> out;
    State s = root();
    collect(s, 0, depth, out);
    return out;
  }

 private:
  void collect(State& s, AgentIdx j, std::size_t depth, std::vector<State>& out) const {
    if (j == depth) {
      out.push_back(s);
      return;
    }
    for (FacilityIdx f = 0; f < m_; ++f) {
      if (!can_place(s, j, f)) continue;
      place(s, j, f);
      collect(s, j + 1, depth, out);
      unplace(s, j);
    }
  }

  const AssignmentProblem& p_;
  std::size_t n_, m_;
  std::vector<std::vector<AgentIdx>> with_, without_;
};

struct Best {
  Assignment x;
  double cost = std::numeric_limits<double>::infinity();
  bool found = false;
};

void check_dimensions(const AssignmentProblem& p, const Matrix& dist) {
  if (dist.rows() != p.num_agents() || dist.cols() != p.num_facilities()) {
    throw InputError("distance matrix is " + std::to_string(dist.rows()) + "x" + std::to_string(dist.cols()) +
                     ", problem is " + std::to_string(p.num_agents()) + "x" + std::to_string(p.num_facilities()));
  }
}

}  // namespace

void for_each_valid_assignment(const AssignmentProblem& p, const std::function<void(const Assignment&)>& visit) {
  Enumerator e(p);
  auto s = e.root();
  e.run(s, 0, visit);
}

std::vector<Assignment> valid_assignments(const AssignmentProblem& p, std::uint64_t limit) {
  std::vector<Assignment> out;
  for_each_valid_assignment(p, [&](const Assignment& x) {
    if (out.size() >= limit) {
      throw SearchSpaceTooLarge("more than " + std::to_string(limit) + " valid assignments");
    }
    out.push_back(x);
  });
  return out;
}

SearchResult minimize_assignment(const AssignmentProblem& p, const Matrix& dist, Execution exec,
                                 std::uint64_t limit) {
  check_dimensions(p, dist);
  if (p.search_space() > limit) {
    throw SearchSpaceTooLarge("exhaustive search over " + std::to_string(p.num_facilities()) + "^" +
                              std::to_string(p.num_agents()) + " assignments exceeds the limit of " +
                              std::to_string(limit));
  }
  const Enumerator e(p);
  const CostSpec& spec = p.cost();
  auto search_from = [&](Enumerator::State s, AgentIdx depth) {
    Best best;
    auto visit = [&](const Assignment& x) {
      const double c = total_cost(x, dist, spec);
      if (!best.found || c < best.cost) {
        best.x = x;
        best.cost = c;
        best.found = true;
      }
    };
    e.run(s, depth, visit);
    return best;
  };

  Best best;
  if (exec == Execution::Serial) {
    best = search_from(e.root(), 0);
  } else {
    const std::size_t depth = std::min<std::size_t>(p.num_agents(), p.num_facilities() >= 8 ? 1 : 2);
    const auto prefixes = e.prefixes(depth);
    std::vector<Best> partial(prefixes.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(prefixes.size()); ++t) {
      partial[t] = search_from(prefixes[t], depth);
    }
    for (auto& b : partial) {
      if (b.found && (!best.found || b.cost < best.cost)) best = std::move(b);
    }
  }
  if (!best.found) throw InputError("no assignment satisfies the constraints");
  return {std::move(best.x), best.cost};
}

namespace {

constexpr std::array<std::pair<Preset, std::string_view>, 7> kPresetNames{{
    {Preset::SocialChoiceSum, "social_choice_sum"},
    {Preset::SocialChoiceMedian, "social_choice_median"},
    {Preset::MatchingMinCost, "matching_min_cost"},
    {Preset::MatchingEgalitarian, "matching_egalitarian"},
    {Preset::KCenter, "k_center"},
    {Preset::KMedian, "k_median"},
    {Preset::FacilityLocation, "facility_location"},
}};

}  // namespace

std::string_view to_string(Preset p) {
  for (auto [preset, name] : kPresetNames)
    if (preset == p) return name;
  return "unknown";
}

Preset parse_preset(std::string_view name) {
  for (auto [preset, n] : kPresetNames)
    if (n == name) return preset;
  throw InputError("unknown problem preset '" + std::string(name) + "'");
}

std::vector<Preset> all_presets() {
  std::vector<Preset> out;
  for (auto [preset, name] : kPresetNames) out.push_back(preset);
  return out;
}

bool is_social_choice(Preset p) { return p == Preset::SocialChoiceSum || p == Preset::SocialChoiceMedian; }

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  auto pen = [](const std::vector<CoassignPenalty>& v) {
    std::vector<std::tuple<AgentIdx, AgentIdx, double>> out;
    for (const auto& p : v) out.emplace_back(p.a, p.b, p.penalty);
    return out;
  };
  return a.preset == b.preset && a.k == b.k && a.capacities == b.capacities && a.opening_costs == b.opening_costs &&
         a.together == b.together && a.apart == b.apart && pen(a.penalties) == pen(b.penalties);
}

AssignmentProblem build_problem(const ProblemSpec& spec, std::size_t n, std::size_t m) {
  ConstraintSet c;
  CostSpec cost;
  c.capacities = spec.capacities;
  c.together = spec.together;
  c.apart = spec.apart;
  cost.opening_costs = spec.opening_costs;
  cost.penalties = spec.penalties;

  auto unit_capacities = [&] {
    if (n != m) {
      throw InputError("matching presets need as many agents as facilities (n=" + std::to_string(n) +
                       ", m=" + std::to_string(m) + ")");
    }
    if (c.capacities.empty()) c.capacities.assign(m, 1);
    for (auto& cap : c.capacities) cap = std::min<std::size_t>(cap, 1);
  };
  auto require_k = [&] {
    if (!spec.k || *spec.k < 1 || *spec.k > m) {
      throw InputError(std::string(to_string(spec.preset)) + " needs 1 <= k <= m");
    }
    c.max_open = *spec.k;
  };

  switch (spec.preset) {
    case Preset::SocialChoiceSum:
      c.min_open = 1;
      c.max_open = 1;
      cost.distance_cost = DistanceCost::Sum;
      break;
    case Preset::SocialChoiceMedian:
      throw UnsupportedCost(
          "social_choice_median has a median cost, which is not subadditive; use the majority-graph mechanism");
    case Preset::MatchingMinCost:
      unit_capacities();
      cost.distance_cost = DistanceCost::Sum;
      break;
    case Preset::MatchingEgalitarian:
      unit_capacities();
      cost.distance_cost = DistanceCost::Max;
      break;
    case Preset::KCenter:
      require_k();
      cost.distance_cost = DistanceCost::Max;
      break;
    case Preset::KMedian:
      require_k();
      cost.distance_cost = DistanceCost::Sum;
      break;
    case Preset::FacilityLocation:
      if (cost.opening_costs.size() != m) throw InputError("facility_location needs one opening cost per facility");
      cost.distance_cost = DistanceCost::Sum;
      break;
  }
  return AssignmentProblem(n, m, std::move(c), std::move(cost));
}

}  // namespace odist
