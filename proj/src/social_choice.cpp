#include "odist/social_choice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace odist {

std::optional<FacilityIdx> MajorityGraph::condorcet_winner() const {
  for (FacilityIdx a = 0; a < m_; ++a) {
    bool all = true;
    for (FacilityIdx b = 0; b < m_ && all; ++b)
      if (b != a && !defeats(a, b)) all = false;
    if (all) return a;
  }
  return std::nullopt;
}

std::vector<std::pair<FacilityIdx, FacilityIdx>> MajorityGraph::edges() const {
  std::vector<std::pair<FacilityIdx, FacilityIdx>> out;
  for (FacilityIdx a = 0; a < m_; ++a)
    for (FacilityIdx b = 0; b < m_; ++b)
      if (has_edge(a, b)) out.emplace_back(a, b);
  return out;
}

MajorityGraph majority_graph(const PreferenceProfile& profile) {
  if (profile.is_top_only()) throw InputError("majority graph needs full rankings, profile is top-only");
  MajorityGraph g;
  g.m_ = profile.num_facilities();
  g.n_ = profile.num_agents();
  g.counts_.assign(g.m_ * g.m_, 0);
  for (AgentIdx i = 0; i < g.n_; ++i) {
    auto r = profile.ranking(i);
    for (std::size_t p = 0; p < r.size(); ++p)
      for (std::size_t q = p + 1; q < r.size(); ++q) ++g.counts_[r[p] * g.m_ + r[q]];
  }
  return g;
}

std::size_t DistancePartialOrder::pair_index(FacilityIdx a, FacilityIdx b) const {
  if (a == b || a >= m_ || b >= m_) throw InputError("distance pair needs two distinct facilities");
  if (a > b) std::swap(a, b);
  // Row-major index into the strict upper triangle.
  return a * m_ - a * (a + 1) / 2 + (b - a - 1);
}

DistancePartialOrder DistancePartialOrder::from_distances(const FacilityDistances& l) {
  DistancePartialOrder po;
  po.m_ = l.size();
  const std::size_t p = po.num_pairs();
  std::vector<double> value(p);
  for (FacilityIdx a = 0; a < po.m_; ++a)
    for (FacilityIdx b = a + 1; b < po.m_; ++b) value[po.pair_index(a, b)] = l(a, b);
  po.reach_.assign(p * p, 0);
  for (std::size_t x = 0; x < p; ++x)
    for (std::size_t y = 0; y < p; ++y) po.reach_[x * p + y] = value[x] <= value[y];
  po.close();
  return po;
}

DistancePartialOrder DistancePartialOrder::from_rankings(const CandidateRankings& rankings) {
  DistancePartialOrder po;
  po.m_ = rankings.size();
  if (po.m_ == 0) throw InputError("candidate rankings are empty");
  for (FacilityIdx y = 0; y < po.m_; ++y) {
    const auto& r = rankings[y];
    std::vector<char> seen(po.m_, 0);
    if (r.size() + 1 != po.m_) {
      throw InputError("facility " + std::to_string(y) + " must rank the other " + std::to_string(po.m_ - 1) +
                       " facilities");
    }
    for (FacilityIdx z : r) {
      if (z >= po.m_ || z == y || seen[z]) {
        throw InputError("facility " + std::to_string(y) + " ranking is not a total order of the others");
      }
      seen[z] = 1;
    }
  }
  const std::size_t p = po.num_pairs();
  po.reach_.assign(p * p, 0);
  for (std::size_t x = 0; x < p; ++x) po.reach_[x * p + x] = 1;
  for (FacilityIdx y = 0; y < po.m_; ++y) {
    const auto& r = rankings[y];
    for (std::size_t k = 0; k + 1 < r.size(); ++k)
      po.reach_[po.pair_index(y, r[k]) * p + po.pair_index(y, r[k + 1])] = 1;
  }
  po.close();
  return po;
}

void DistancePartialOrder::close() {
  const std::size_t p = num_pairs();
  // Reflexive-transitive closure; at most m(m-1)/2 nodes.
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t i = 0; i < p; ++i)
      if (reach_[i * p + k])
        for (std::size_t j = 0; j < p; ++j)
          if (reach_[k * p + j]) reach_[i * p + j] = 1;
  // Mutually reachable pairs are the strongly connected components.
  class_of_.assign(p, p);
  num_classes_ = 0;
  for (std::size_t i = 0; i < p; ++i) {
    if (class_of_[i] != p) continue;
    for (std::size_t j = i; j < p; ++j)
      if (reach_[i * p + j] && reach_[j * p + i]) class_of_[j] = num_classes_;
    ++num_classes_;
  }
}

SocialChoiceOutcome sum_winner(const ProjectedAgents& agents) {
  SocialChoiceOutcome out;
  const std::size_t m = agents.num_facilities();
  out.scores.assign(m, 0.0);
  for (FacilityIdx x = 0; x < m; ++x)
    for (AgentIdx i = 0; i < agents.num_agents(); ++i) out.scores[x] += agents.distance(i, x);
  out.winner = static_cast<FacilityIdx>(std::min_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
  return out;
}

AugmentedGraph augment_majority_graph(const MajorityGraph& graph, const DistancePartialOrder& order,
                                      std::span<const std::pair<FacilityIdx, FacilityIdx>> pair_order) {
  const std::size_t m = graph.size();
  if (order.num_facilities() != m) throw InputError("partial order and profile disagree on m");
  AugmentedGraph g;
  g.m = m;
  g.edge.assign(m * m, 0);
  g.witness.assign(m * m, std::nullopt);
  for (FacilityIdx a = 0; a < m; ++a)
    for (FacilityIdx b = 0; b < m; ++b) g.edge[a * m + b] = graph.has_edge(a, b);

  std::vector<std::pair<FacilityIdx, FacilityIdx>> default_order;
  if (pair_order.empty()) {
    for (FacilityIdx a = 0; a < m; ++a)
      for (FacilityIdx b = a + 1; b < m; ++b) default_order.emplace_back(a, b);
    pair_order = default_order;
  }
  for (auto [a, b] : pair_order) {
    // Only pairs with a single majority direction (y, w) are candidates.
    const bool ab = graph.has_edge(a, b), ba = graph.has_edge(b, a);
    if (ab == ba) continue;
    const FacilityIdx y = ab ? a : b;
    const FacilityIdx w = ab ? b : a;
    for (FacilityIdx p = 0; p < m; ++p) {
      if (p == y || !graph.has_edge(p, y)) continue;
      if (order.leq(y, w, y, p)) {
        g.edge[w * m + y] = 1;
        g.witness[w * m + y] = p;
        break;
      }
    }
  }
  return g;
}

SocialChoiceOutcome median_winner(const PreferenceProfile& profile, const DistancePartialOrder& order) {
  const MajorityGraph graph = majority_graph(profile);
  const std::size_t m = graph.size();
  SocialChoiceOutcome out;
  if (auto cw = graph.condorcet_winner()) {
    out.winner = *cw;
    out.condorcet = true;
    for (FacilityIdx y = 0; y < m; ++y)
      if (y != *cw) out.certificate.push_back({y, EdgeJustification::Kind::Majority, std::nullopt});
    return out;
  }
  const AugmentedGraph g = augment_majority_graph(graph, order);
  for (FacilityIdx w = 0; w < m; ++w) {
    bool dominates = true;
    for (FacilityIdx y = 0; y < m && dominates; ++y)
      if (y != w && !g.has_edge(w, y)) dominates = false;
    if (!dominates) continue;
    out.winner = w;
    for (FacilityIdx y = 0; y < m; ++y) {
      if (y == w) continue;
      if (graph.has_edge(w, y)) {
        out.certificate.push_back({y, EdgeJustification::Kind::Majority, std::nullopt});
      } else {
        out.certificate.push_back({y, EdgeJustification::Kind::Witness, g.witness[w * m + y]});
      }
    }
    return out;
  }
  throw InternalError("augmented majority graph has no vertex with edges to every other vertex");
}

SocialChoiceOutcome copeland_winner(const PreferenceProfile& profile) {
  const MajorityGraph graph = majority_graph(profile);
  const std::size_t m = graph.size();
  SocialChoiceOutcome out;
  out.scores.assign(m, 0.0);
  for (FacilityIdx a = 0; a < m; ++a)
    for (FacilityIdx b = 0; b < m; ++b) {
      if (a == b) continue;
      if (graph.defeats(a, b)) {
        out.scores[a] += 1.0;
      } else if (!graph.defeats(b, a)) {
        out.scores[a] += 0.5;
      }
    }
  out.winner = static_cast<FacilityIdx>(std::max_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
  out.condorcet = graph.condorcet_winner().has_value();
  return out;
}

double evaluate_sum_cost(FacilityIdx x, const FullMetric& d) {
  double total = 0.0;
  for (AgentIdx i = 0; i < d.num_agents(); ++i) total += d(i, x);
  return total;
}

std::size_t percentile_rank(std::size_t n, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("percentile alpha must lie in [0, 1]");
  if (n == 0) throw InputError("percentile of an empty set");
  // The small slack keeps e.g. 0.6*5 from flooring to 2.
  const auto k = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9)) + 1;
  return std::min(k, n);
}

double percentile_value(std::span<const double> values, double alpha) {
  const std::size_t k = percentile_rank(values.size(), alpha);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double evaluate_percentile_cost(FacilityIdx x, const FullMetric& d, double alpha) {
  std::vector<double> column(d.num_agents());
  for (AgentIdx i = 0; i < d.num_agents(); ++i) column[i] = d(i, x);
  return percentile_value(column, alpha);
}

}  // namespace odist
