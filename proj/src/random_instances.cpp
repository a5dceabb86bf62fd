#include "odist/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odist {

namespace {

Matrix floyd_warshall(Matrix w) {
  const std::size_t m = w.rows();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) w(i, j) = std::min(w(i, j), w(i, k) + w(k, j));
  return w;
}

Matrix euclidean(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 20);
  std::vector<std::pair<double, double>> pts(m);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  Matrix l(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      l(a, b) = std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
  return l;
}

Matrix shortest_path(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> weight(1, 4);
  Matrix w(m, m, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < m; ++a) w(a, a) = 0.0;
  // A random spanning path keeps the graph connected; extra edges add ties.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k + 1 < m; ++k) w(order[k], order[k + 1]) = w(order[k + 1], order[k]) = weight(rng);
  std::bernoulli_distribution extra(0.4);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (extra(rng)) w(a, b) = w(b, a) = std::min<double>(w(a, b), weight(rng));
  return floyd_warshall(std::move(w));
}

Matrix clustered(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> cluster_count(1, std::max<std::size_t>(1, (m + 1) / 2));
  const std::size_t c = cluster_count(rng);
  Matrix centers = euclidean(c, rng);
  std::uniform_int_distribution<std::size_t> pick(0, c - 1);
  std::vector<std::size_t> of(m);
  for (auto& k : of) k = pick(rng);
  Matrix l(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) l(a, b) = centers(of[a], of[b]);
  return l;
}

}  // namespace

FacilityDistances random_facility_distances(std::size_t m, MetricFamily family, std::mt19937_64& rng) {
  switch (family) {
    case MetricFamily::Euclidean:
      return FacilityDistances(euclidean(m, rng));
    case MetricFamily::ShortestPath:
      return FacilityDistances(shortest_path(m, rng));
    case MetricFamily::Clustered:
      return FacilityDistances(clustered(m, rng));
  }
  throw InputError("unknown metric family");
}

FacilityDistances random_facility_distances(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> family(0, 2);
  return random_facility_distances(m, static_cast<MetricFamily>(family(rng)), rng);
}

FacilityDistances random_generic_distances(std::size_t m, std::mt19937_64& rng) {
  // Points in the plane with continuous coordinates: distinct distances
  // with probability one; shortest-path closure is unnecessary.
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  while (true) {
    std::vector<std::pair<double, double>> pts(m);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    Matrix l(m, m);
    std::vector<double> values;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        l(a, b) = std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
        if (a < b) values.push_back(l(a, b));
      }
    std::sort(values.begin(), values.end());
    bool distinct = true;
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
      if (values[k + 1] - values[k] < 1e-6) distinct = false;
    if (distinct && (values.empty() || values.front() > 1e-6)) return FacilityDistances(std::move(l));
  }
}

PreferenceProfile random_profile(std::size_t n, const FacilityDistances& l, std::mt19937_64& rng) {
  const std::size_t m = l.size();
  std::bernoulli_distribution uniform(0.5);
  if (uniform(rng)) {
    std::vector<std::vector<FacilityIdx>> rankings(n, std::vector<FacilityIdx>(m));
    for (auto& r : rankings) {
      std::iota(r.begin(), r.end(), 0);
      std::shuffle(r.begin(), r.end(), rng);
    }
    return PreferenceProfile::full(m, std::move(rankings));
  }
  // Each agent is a new point joined to every facility g by an edge of
  // length t + l(anchor, g) + u_g. Any two such edges add up to at least
  // l(g, h), so shortest paths keep l and give a consistent metric.
  const double scale = std::max(1.0, l.max_distance());
  std::uniform_real_distribution<double> edge(0.0, scale);
  std::uniform_int_distribution<FacilityIdx> anchor_dist(0, m - 1);
  Matrix d(n, m);
  for (AgentIdx i = 0; i < n; ++i) {
    const FacilityIdx anchor = anchor_dist(rng);
    const double t = 0.5 * edge(rng);
    std::vector<double> r(m);
    for (FacilityIdx g = 0; g < m; ++g) r[g] = t + l(anchor, g) + edge(rng);
    for (FacilityIdx f = 0; f < m; ++f) {
      double best = std::numeric_limits<double>::infinity();
      for (FacilityIdx g = 0; g < m; ++g) best = std::min(best, r[g] + l(g, f));
      d(i, f) = best;
    }
  }
  return preferences_from_metric(FullMetric(std::move(d), l));
}

ProblemSpec random_problem_spec(Preset preset, std::size_t n, std::size_t m, std::mt19937_64& rng, bool extras) {
  ProblemSpec spec;
  spec.preset = preset;
  std::uniform_int_distribution<std::size_t> k_dist(1, m);
  std::uniform_real_distribution<double> cost(0.0, 5.0);
  std::bernoulli_distribution coin(0.3);
  std::uniform_int_distribution<AgentIdx> agent(0, n - 1);
  auto distinct_pair = [&]() -> std::optional<std::pair<AgentIdx, AgentIdx>> {
    if (n < 2) return std::nullopt;
    AgentIdx a = agent(rng), b = agent(rng);
    while (b == a) b = agent(rng);
    return std::make_pair(a, b);
  };
  switch (preset) {
    case Preset::KCenter:
    case Preset::KMedian:
      spec.k = k_dist(rng);
      break;
    case Preset::FacilityLocation:
      spec.opening_costs.resize(m);
      for (auto& c : spec.opening_costs) c = cost(rng);
      break;
    default:
      break;
  }
  if (!extras) return spec;
  const bool several_open = m >= 2 && (preset == Preset::FacilityLocation ||
                            ((preset == Preset::KCenter || preset == Preset::KMedian) && spec.k >= 2));
  if (coin(rng)) {
    if (auto p = distinct_pair()) spec.penalties.push_back({p->first, p->second, cost(rng)});
  }
  if (preset != Preset::MatchingMinCost && preset != Preset::MatchingEgalitarian && coin(rng)) {
    if (auto p = distinct_pair()) spec.together.push_back(*p);
  }
  if (several_open && coin(rng)) {
    if (auto p = distinct_pair()) {
      const bool clash = std::any_of(spec.together.begin(), spec.together.end(), [&](auto t) {
        return (t.first == p->first && t.second == p->second) || (t.first == p->second && t.second == p->first);
      });
      if (!clash) spec.apart.push_back(*p);
    }
  }
  return spec;
}

}  // namespace odist
