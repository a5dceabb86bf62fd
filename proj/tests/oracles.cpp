#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace odist::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
  Point a;
  double b;
};

std::vector<Row> agent_rows(const PreferenceProfile& profile, AgentIdx i, const FacilityDistances& l) {
  const std::size_t m = l.size();
  std::vector<Row> rows;
  auto unit = [m](FacilityIdx p, double cp, FacilityIdx q, double cq) {
    Point a(m, 0.0);
    a[p] += cp;
    a[q] += cq;
    return a;
  };
  const auto ranking = profile.ranking(i);
  if (profile.is_top_only()) {
    for (FacilityIdx f = 0; f < m; ++f)
      if (f != ranking[0]) rows.push_back({unit(ranking[0], 1.0, f, -1.0), 0.0});
  } else {
    for (std::size_t r = 0; r + 1 < ranking.size(); ++r)
      rows.push_back({unit(ranking[r], 1.0, ranking[r + 1], -1.0), 0.0});
  }
  for (FacilityIdx a = 0; a < m; ++a) {
    for (FacilityIdx b = a + 1; b < m; ++b) {
      rows.push_back({unit(a, 1.0, b, -1.0), l(a, b)});
      rows.push_back({unit(a, -1.0, b, 1.0), l(a, b)});
      rows.push_back({unit(a, -1.0, b, -1.0), -l(a, b)});
    }
    Point neg(m, 0.0);
    neg[a] = -1.0;
    rows.push_back({neg, 0.0});
  }
  return rows;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<Point> solve_square(std::vector<Point> a, Point b) {
  const std::size_t m = b.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-12) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < m; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Point x(m);
  for (std::size_t c = 0; c < m; ++c) x[c] = b[c] / a[c][c];
  return x;
}

std::vector<Point> vertices_of(const std::vector<Row>& rows, std::size_t m) {
  std::vector<Point> out;
  std::vector<std::size_t> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  if (rows.size() < m) return out;
  while (true) {
    std::vector<Point> a;
    Point b;
    for (std::size_t r : pick) {
      a.push_back(rows[r].a);
      b.push_back(rows[r].b);
    }
    if (auto v = solve_square(std::move(a), std::move(b))) {
      bool feasible = true;
      for (const auto& row : rows) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < m; ++k) lhs += row.a[k] * (*v)[k];
        if (lhs > row.b + 1e-9 * (1.0 + std::abs(row.b))) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        bool dup = false;
        for (const auto& u : out) {
          double diff = 0.0;
          for (std::size_t k = 0; k < m; ++k) diff = std::max(diff, std::abs(u[k] - (*v)[k]));
          if (diff < 1e-10) {
            dup = true;
            break;
          }
        }
        if (!dup) out.push_back(*v);
      }
    }
    // next combination
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == rows.size() - m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

// Root of the decreasing function g on [1, 1e7]; +inf if g stays positive.
template <class G>
double bisect_ratio(const G& g, double tol) {
  double lo = 1.0, hi = 1e7;
  if (g(hi) > tol) return kInf;
  if (g(lo) <= tol) return 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > tol ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

std::vector<Point> agent_vertices(const PreferenceProfile& profile, AgentIdx i, const FacilityDistances& l,
                                  std::optional<std::pair<FacilityIdx, double>> cap) {
  auto rows = agent_rows(profile, i, l);
  if (cap) {
    Point a(l.size(), 0.0);
    a[cap->first] = 1.0;
    rows.push_back({a, cap->second});
  }
  return vertices_of(rows, l.size());
}

double sum_distortion(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l) {
  const std::size_t n = profile.num_agents();
  std::vector<std::vector<Point>> verts;
  for (AgentIdx i = 0; i < n; ++i) verts.push_back(agent_vertices(profile, i, l));
  const double tol = 1e-12 * (1.0 + l.max_distance()) * static_cast<double>(n);
  double best = 1.0;
  for (FacilityIdx x = 0; x < l.size(); ++x) {
    if (x == w) continue;
    auto g = [&](double r) {
      double total = 0.0;
      for (const auto& vs : verts) {
        double top = -kInf;
        for (const auto& v : vs) top = std::max(top, v[w] - r * v[x]);
        total += top;
      }
      return total;
    };
    best = std::max(best, bisect_ratio(g, tol));
  }
  return best;
}

double sum_assignment_distortion(const Assignment& x, const PreferenceProfile& profile,
                                 const FacilityDistances& l, const AssignmentProblem& problem) {
  const std::size_t n = profile.num_agents();
  const std::size_t m = l.size();
  std::vector<std::vector<Point>> verts;
  for (AgentIdx i = 0; i < n; ++i) verts.push_back(agent_vertices(profile, i, l));
  const double cx = facility_cost(x, problem.cost());
  const double tol = 1e-12 * (1.0 + l.max_distance() + cx) * static_cast<double>(n);
  double best = 1.0;
  Assignment y(n, 0);
  while (true) {
    if (y != x && problem.is_valid(y)) {
      const double cy = facility_cost(y, problem.cost());
      auto g = [&](double r) {
        double total = cx - r * cy;
        for (AgentIdx i = 0; i < n; ++i) {
          double top = -kInf;
          for (const auto& v : verts[i]) top = std::max(top, v[x[i]] - r * v[y[i]]);
          total += top;
        }
        return total;
      };
      best = std::max(best, bisect_ratio(g, tol));
    }
    std::size_t i = 0;
    while (i < n && ++y[i] == m) y[i++] = 0;
    if (i == n) break;
  }
  return best;
}

double percentile_distortion(FacilityIdx w, const PreferenceProfile& profile, const FacilityDistances& l,
                             double alpha) {
  const std::size_t n = profile.num_agents();
  const std::size_t m = l.size();
  const std::size_t k = std::min(static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n))) + 1, n);
  const double lmax = l.max_distance();

  double best = 1.0;
  for (FacilityIdx x = 0; x < m; ++x) {
    if (x == w) continue;
    std::vector<double> min_x(n, kInf);
    for (AgentIdx i = 0; i < n; ++i)
      for (const auto& v : agent_vertices(profile, i, l)) min_x[i] = std::min(min_x[i], v[x]);

    auto h = [&](AgentIdx a, double u) {
      double top = -kInf;
      for (const auto& v : agent_vertices(profile, a, l, std::pair{x, u})) top = std::max(top, v[w]);
      return top;
    };
    std::map<std::pair<AgentIdx, double>, double> memo;
    auto sup_ratio = [&](AgentIdx a, double u_lo) {
      auto key = std::pair{a, u_lo};
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      double result;
      if (u_lo <= 1e-12 && h(a, 0.0) > 1e-9) {
        result = kInf;
      } else {
        const double lo = std::max(u_lo, 1e-7 * (1.0 + lmax));
        const double hi = lo + 4.0 * static_cast<double>(m) * (1.0 + lmax);
        auto f = [&](double u) { return h(a, u) / u; };
        constexpr int kGrid = 300;
        std::vector<double> us;
        for (int g = 0; g <= kGrid; ++g) {
          const double t = static_cast<double>(g) / kGrid;
          us.push_back(lo + (hi - lo) * t * t * t);
        }
        std::size_t arg = 0;
        double best_f = -kInf;
        for (std::size_t g = 0; g < us.size(); ++g) {
          const double fu = f(us[g]);
          if (fu > best_f) {
            best_f = fu;
            arg = g;
          }
        }
        // golden-section refinement around the best grid point
        double a0 = us[arg == 0 ? 0 : arg - 1], b0 = us[std::min(arg + 1, us.size() - 1)];
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 80 && b0 - a0 > 1e-13 * (1.0 + b0); ++it) {
          const double c = b0 - phi * (b0 - a0);
          const double d = a0 + phi * (b0 - a0);
          const double fc = f(c), fd = f(d);
          best_f = std::max({best_f, fc, fd});
          if (fc >= fd) b0 = d;
          else a0 = c;
        }
        result = best_f;
      }
      memo[key] = result;
      return result;
    };

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      double u_lo = 0.0;
      for (AgentIdx j = 0; j < n; ++j)
        if (mask >> j & 1u) u_lo = std::max(u_lo, min_x[j]);
      for (AgentIdx a = 0; a < n; ++a)
        if (mask >> a & 1u) best = std::max(best, sup_ratio(a, u_lo));
    }
  }
  return best;
}

double matching_sum_opt(const Matrix& cost) {
  std::vector<std::size_t> p(cost.rows());
  std::iota(p.begin(), p.end(), 0);
  double best = kInf;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cost(i, p[i]);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double matching_bottleneck_opt(const Matrix& cost) {
  std::vector<std::size_t> p(cost.rows());
  std::iota(p.begin(), p.end(), 0);
  double best = kInf;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s = std::max(s, cost(i, p[i]));
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double k_center_opt(const Matrix& dist, std::size_t k) {
  const std::size_t m = dist.cols();
  double best = kInf;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < dist.rows(); ++i) {
      double near = kInf;
      for (std::size_t f = 0; f < m; ++f)
        if (mask >> f & 1u) near = std::min(near, dist(i, f));
      worst = std::max(worst, near);
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace odist::oracle
