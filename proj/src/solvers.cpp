#include "odist/solvers.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <string>
#include <numeric>

namespace odist {

namespace {

constexpr std::array<std::pair<SolverKind, std::string_view>, 6> kSolverNames{{
    {SolverKind::BruteForce, "brute_force"},
    {SolverKind::MinCostMatching, "min_cost_matching"},
    {SolverKind::BottleneckMatching, "bottleneck_matching"},
    {SolverKind::KCenterGreedy, "k_center_greedy"},
    {SolverKind::KMedian, "k_median"},
    {SolverKind::FacilityLocation, "facility_location"},
}};

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_square(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw InputError("matching needs a square cost matrix, got " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()));
  }
}

// Kuhn's augmenting path; match_of_col[c] = row or npos.
bool augment(std::size_t r, const std::vector<std::vector<std::size_t>>& adj, std::vector<char>& seen,
             std::vector<std::size_t>& match_of_col) {
  for (std::size_t c : adj[r]) {
    if (seen[c]) continue;
    seen[c] = 1;
    if (match_of_col[c] == SIZE_MAX || augment(match_of_col[c], adj, seen, match_of_col)) {
      match_of_col[c] = r;
      return true;
    }
  }
  return false;
}

std::optional<Assignment> perfect_matching_below(const Matrix& cost, double threshold) {
  const std::size_t n = cost.rows();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (cost(r, c) <= threshold) adj[r].push_back(c);
  std::vector<std::size_t> match_of_col(n, SIZE_MAX);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<char> seen(n, 0);
    if (!augment(r, adj, seen, match_of_col)) return std::nullopt;
  }
  Assignment x(n);
  for (std::size_t c = 0; c < n; ++c) x[match_of_col[c]] = c;
  return x;
}

std::uint64_t binomial_capped(std::size_t m, std::size_t k, std::uint64_t cap) {
  k = std::min(k, m - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (m - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

std::string_view to_string(SolverKind s) {
  for (auto [kind, name] : kSolverNames)
    if (kind == s) return name;
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  for (auto [kind, n] : kSolverNames)
    if (n == name) return kind;
  throw InputError("unknown solver '" + std::string(name) + "'");
}

SolverResult brute_force_optimal(const AssignmentProblem& p, const Matrix& dist, Execution exec) {
  auto best = minimize_assignment(p, dist, exec);
  return {std::move(best.assignment), 1.0, true};
}

SolverResult min_cost_matching(const Matrix& cost) {
  require_square(cost);
  const std::size_t n = cost.rows();
  if (n == 0) return {{}, 1.0, true};
  // Potentials-based Hungarian algorithm with 1-based bookkeeping.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment x(n);
  for (std::size_t j = 1; j <= n; ++j) x[p[j] - 1] = j - 1;
  return {std::move(x), 1.0, true};
}

SolverResult bottleneck_matching(const Matrix& cost) {
  require_square(cost);
  const std::size_t n = cost.rows();
  if (n == 0) return {{}, 1.0, true};
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (double c : cost.row(r)) values.push_back(c);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::size_t lo = 0, hi = values.size() - 1;  // the largest value always admits a matching
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching_below(cost, values[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  auto x = perfect_matching_below(cost, values[lo]);
  if (!x) throw InternalError("bottleneck search ended on an infeasible threshold");
  return {std::move(*x), 1.0, true};
}

double connect_to_nearest(const Matrix& dist, std::span<const FacilityIdx> open, Assignment* x) {
  if (open.empty()) throw InputError("no open facility to connect to");
  double total = 0.0;
  if (x) x->assign(dist.rows(), 0);
  for (std::size_t i = 0; i < dist.rows(); ++i) {
    FacilityIdx best = open[0];
    for (FacilityIdx f : open)
      if (dist(i, f) < dist(i, best) || (dist(i, f) == dist(i, best) && f < best)) best = f;
    total += dist(i, best);
    if (x) (*x)[i] = best;
  }
  return total;
}

SolverResult k_center_greedy(const ProjectedAgents& agents, std::size_t k) {
  const std::size_t m = agents.num_facilities();
  if (k < 1 || k > m) throw InputError("k_center needs 1 <= k <= m");
  const auto& l = agents.facility_distances();
  std::vector<char> hosts(m, 0);
  for (FacilityIdx t : agents.tops()) hosts[t] = 1;
  std::vector<FacilityIdx> centers;
  for (FacilityIdx f = 0; f < m; ++f)
    if (hosts[f]) {
      centers.push_back(f);
      break;
    }
  if (centers.empty()) return {{}, 2.0, false};
  std::vector<double> gap(m, kInf);
  while (true) {
    const FacilityIdx c = centers.back();
    for (FacilityIdx f = 0; f < m; ++f) gap[f] = std::min(gap[f], l(f, c));
    if (centers.size() == k) break;
    FacilityIdx far = m;
    for (FacilityIdx f = 0; f < m; ++f)
      if (hosts[f] && (far == m || gap[f] > gap[far])) far = f;
    if (gap[far] <= 0.0) break;
    centers.push_back(far);
  }
  std::sort(centers.begin(), centers.end());
  Assignment x;
  connect_to_nearest(agents.cost_matrix(), centers, &x);
  return {std::move(x), 2.0, false};
}

SolverResult k_median_solver(const Matrix& dist, std::size_t k, Strategy strategy) {
  const std::size_t m = dist.cols();
  if (k < 1 || k > m) throw InputError("k_median needs 1 <= k <= m");
  const bool small = binomial_capped(m, k, kMaxKMedianSubsets) <= kMaxKMedianSubsets;
  if (strategy == Strategy::Exact && !small) {
    throw SearchSpaceTooLarge("exact k-median would enumerate more than " + std::to_string(kMaxKMedianSubsets) +
                              " subsets");
  }
  std::vector<FacilityIdx> best;
  double best_cost = kInf;
  if (strategy == Strategy::Exact || (strategy == Strategy::Auto && small)) {
    std::vector<FacilityIdx> s(k);
    std::iota(s.begin(), s.end(), 0);
    while (true) {
      const double c = connect_to_nearest(dist, s);
      if (c < best_cost) {
        best_cost = c;
        best = s;
      }
      // Next k-subset in lexicographic order.
      std::size_t i = k;
      while (i > 0 && s[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++s[i - 1];
      for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    Assignment x;
    connect_to_nearest(dist, best, &x);
    return {std::move(x), 1.0, true};
  }

  // Greedy seeding.
  std::vector<char> in(m, 0);
  while (best.size() < k) {
    FacilityIdx pick = m;
    double pick_cost = kInf;
    for (FacilityIdx f = 0; f < m; ++f) {
      if (in[f]) continue;
      auto trial = best;
      trial.push_back(f);
      const double c = connect_to_nearest(dist, trial);
      if (c < pick_cost) {
        pick_cost = c;
        pick = f;
      }
    }
    best.push_back(pick);
    in[pick] = 1;
    best_cost = pick_cost;
  }
  // First-improvement single swaps until locally optimal.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t s = 0; s < k && !improved; ++s) {
      for (FacilityIdx f = 0; f < m && !improved; ++f) {
        if (in[f]) continue;
        auto trial = best;
        trial[s] = f;
        const double c = connect_to_nearest(dist, trial);
        if (c < best_cost * (1.0 - 1e-12) - 1e-15) {
          in[best[s]] = 0;
          in[f] = 1;
          best = std::move(trial);
          best_cost = c;
          improved = true;
        }
      }
    }
  }
  std::sort(best.begin(), best.end());
  Assignment x;
  connect_to_nearest(dist, best, &x);
  return {std::move(x), kKMedianLocalSearchBeta, false};
}

SolverResult facility_location_solver(const Matrix& dist, std::span<const double> opening_costs, Strategy strategy) {
  const std::size_t n = dist.rows(), m = dist.cols();
  if (m == 0) throw InputError("facility location needs at least one facility");
  if (opening_costs.size() != m) throw InputError("facility location needs one opening cost per facility");
  const CostSpec spec{DistanceCost::Sum, {opening_costs.begin(), opening_costs.end()}, {}};
  const bool small = m <= kMaxExactFacilityLocation;
  if (strategy == Strategy::Exact && !small) {
    throw SearchSpaceTooLarge("exact facility location is limited to m <= " +
                              std::to_string(kMaxExactFacilityLocation));
  }
  if (n == 0) return {{}, 1.0, true};
  if (strategy == Strategy::Exact || (strategy == Strategy::Auto && small)) {
    Assignment best;
    double best_cost = kInf;
    std::vector<FacilityIdx> open;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      open.clear();
      for (FacilityIdx f = 0; f < m; ++f)
        if (mask & (1u << f)) open.push_back(f);
      Assignment x;
      connect_to_nearest(dist, open, &x);
      const double c = total_cost(x, dist, spec);
      if (c < best_cost) {
        best_cost = c;
        best = std::move(x);
      }
    }
    return {std::move(best), 1.0, true};
  }

  // Star greedy: repeatedly open the facility whose cheapest star (cost
  // minus switching credits from connected agents, per newly served agent)
  // is smallest; opened facilities then cost nothing.
  std::vector<double> fee(opening_costs.begin(), opening_costs.end());
  std::vector<char> connected(n, 0);
  std::vector<double> current(n, kInf);
  std::vector<char> is_open(m, 0);
  std::size_t remaining = n;
  std::vector<std::size_t> order(n);
  while (remaining > 0) {
    FacilityIdx pick = m;
    std::size_t pick_size = 0;
    double pick_ratio = kInf;
    for (FacilityIdx f = 0; f < m; ++f) {
      double credit = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (connected[i]) credit += std::max(0.0, current[i] - dist(i, f));
      order.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (!connected[i]) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dist(a, f) < dist(b, f); });
      double acc = fee[f] - credit;
      for (std::size_t s = 0; s < order.size(); ++s) {
        acc += dist(order[s], f);
        const double ratio = acc / static_cast<double>(s + 1);
        if (ratio < pick_ratio) {
          pick_ratio = ratio;
          pick = f;
          pick_size = s + 1;
        }
      }
    }
    order.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (!connected[i]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dist(a, pick) < dist(b, pick); });
    for (std::size_t s = 0; s < pick_size; ++s) {
      connected[order[s]] = 1;
      current[order[s]] = dist(order[s], pick);
    }
    remaining -= pick_size;
    for (std::size_t i = 0; i < n; ++i)
      if (connected[i]) current[i] = std::min(current[i], dist(i, pick));
    fee[pick] = 0.0;
    is_open[pick] = 1;
  }
  std::vector<FacilityIdx> open;
  for (FacilityIdx f = 0; f < m; ++f)
    if (is_open[f]) open.push_back(f);
  Assignment x;
  connect_to_nearest(dist, open, &x);
  return {std::move(x), kFacilityLocationGreedyBeta, false};
}

}  // namespace odist
