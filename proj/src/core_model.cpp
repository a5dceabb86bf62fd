#include "odist/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace odist {

namespace {

double scaled_tolerance(double tol, double magnitude) { return tol * std::max(1.0, magnitude); }

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols()) {
      throw InputError("ragged matrix: row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                       " entries, expected " + std::to_string(out.cols()));
    }
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

FacilitySet::FacilitySet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw InputError("facility set must not be empty");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw InputError("facility names must be non-empty");
    if (!seen.insert(n).second) throw InputError("duplicate facility name '" + n + "'");
  }
}

FacilitySet FacilitySet::numbered(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t f = 0; f < m; ++f) names.push_back("F" + std::to_string(f + 1));
  return FacilitySet(std::move(names));
}

std::optional<FacilityIdx> FacilitySet::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<FacilityIdx>(it - names_.begin());
}

FacilityIdx FacilitySet::index_of(std::string_view name) const {
  if (auto f = find(name)) return *f;
  throw InputError("unknown facility '" + std::string(name) + "'");
}

std::optional<MetricViolation> validate_facility_distances(const Matrix& l, double tol) {
  if (l.rows() != l.cols()) {
    throw InputError("facility distance matrix must be square, got " + std::to_string(l.rows()) + "x" +
                     std::to_string(l.cols()));
  }
  const std::size_t m = l.rows();
  const double eps = scaled_tolerance(tol, l.max_abs());
  using Kind = MetricViolation::Kind;
  auto report = [](Kind kind, FacilityIdx a, FacilityIdx b, FacilityIdx c, std::string msg) {
    return MetricViolation{kind, a, b, c, std::move(msg)};
  };
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double v = l(a, b);
      if (!std::isfinite(v)) {
        return report(Kind::NonFinite, a, b, b, "l(" + std::to_string(a) + "," + std::to_string(b) + ") is not finite");
      }
      if (v < -eps) {
        return report(Kind::Negative, a, b, b, "l(" + std::to_string(a) + "," + std::to_string(b) + ") is negative");
      }
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (std::abs(l(a, a)) > eps) {
      return report(Kind::NonzeroDiagonal, a, a, a, "l(" + std::to_string(a) + "," + std::to_string(a) + ") != 0");
    }
    for (std::size_t b = a + 1; b < m; ++b) {
      if (std::abs(l(a, b) - l(b, a)) > eps) {
        return report(Kind::Asymmetric, a, b, b,
                      "l(" + std::to_string(a) + "," + std::to_string(b) + ") != l(" + std::to_string(b) + "," +
                          std::to_string(a) + ")");
      }
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        if (l(a, c) > l(a, b) + l(b, c) + eps) {
          std::ostringstream msg;
          msg << "triangle inequality violated: l(" << a << "," << c << ")=" << l(a, c) << " > l(" << a << "," << b
              << ")+l(" << b << "," << c << ")=" << l(a, b) + l(b, c);
          return report(Kind::Triangle, a, b, c, msg.str());
        }
      }
    }
  }
  return std::nullopt;
}

FacilityDistances::FacilityDistances(Matrix l) : l_(std::move(l)) {
  if (auto v = validate_facility_distances(l_)) throw InputError("invalid facility distances: " + v->message);
}

FacilityDistances FacilityDistances::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("scale factor must be positive");
  Matrix s = l_;
  for (std::size_t a = 0; a < s.rows(); ++a)
    for (std::size_t b = 0; b < s.cols(); ++b) s(a, b) *= factor;
  return FacilityDistances(std::move(s));
}

PreferenceProfile PreferenceProfile::full(std::size_t m, std::vector<std::vector<FacilityIdx>> rankings) {
  if (m == 0) throw InputError("profile needs at least one facility");
  PreferenceProfile p;
  p.m_ = m;
  p.positions_.assign(rankings.size() * m, m);
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto& r = rankings[i];
    if (r.size() != m) {
      throw InputError("agent " + std::to_string(i) + " ranks " + std::to_string(r.size()) + " of " +
                       std::to_string(m) + " facilities");
    }
    for (std::size_t pos = 0; pos < m; ++pos) {
      FacilityIdx f = r[pos];
      if (f >= m) throw InputError("agent " + std::to_string(i) + " ranks unknown facility " + std::to_string(f));
      if (p.positions_[i * m + f] != m) {
        throw InputError("agent " + std::to_string(i) + " ranks facility " + std::to_string(f) + " twice");
      }
      p.positions_[i * m + f] = pos;
    }
  }
  p.rankings_ = std::move(rankings);
  return p;
}

PreferenceProfile PreferenceProfile::top_only(std::size_t m, std::vector<FacilityIdx> tops) {
  if (m == 0) throw InputError("profile needs at least one facility");
  PreferenceProfile p;
  p.m_ = m;
  p.top_only_ = true;
  for (std::size_t i = 0; i < tops.size(); ++i) {
    if (tops[i] >= m) throw InputError("agent " + std::to_string(i) + " has unknown top facility");
    p.rankings_.push_back({tops[i]});
  }
  return p;
}

std::optional<std::string> validate_full_metric(const Matrix& d, const FacilityDistances& l, double tol) {
  if (d.cols() != l.size()) {
    return "metric has " + std::to_string(d.cols()) + " facility columns but l is " + std::to_string(l.size()) +
           "x" + std::to_string(l.size());
  }
  const double eps = scaled_tolerance(tol, std::max(d.max_abs(), l.max_distance()));
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t f = 0; f < d.cols(); ++f) {
      if (!std::isfinite(d(i, f)) || d(i, f) < -eps) {
        return "d(" + std::to_string(i) + "," + std::to_string(f) + ") must be finite and nonnegative";
      }
    }
    for (std::size_t a = 0; a < d.cols(); ++a) {
      for (std::size_t b = a + 1; b < d.cols(); ++b) {
        if (std::abs(d(i, a) - d(i, b)) > l(a, b) + eps) {
          return "agent " + std::to_string(i) + ": |d(i," + std::to_string(a) + ") - d(i," + std::to_string(b) +
                 ")| exceeds l";
        }
        if (d(i, a) + d(i, b) < l(a, b) - eps) {
          return "agent " + std::to_string(i) + ": d(i," + std::to_string(a) + ") + d(i," + std::to_string(b) +
                 ") is below l";
        }
      }
    }
  }
  return std::nullopt;
}

FullMetric::FullMetric(Matrix agent_facility, FacilityDistances l, double tol)
    : d_(std::move(agent_facility)), l_(std::move(l)) {
  if (auto err = validate_full_metric(d_, l_, tol)) throw InputError("invalid metric: " + *err);
}

PreferenceProfile preferences_from_metric(const FullMetric& d) {
  const std::size_t m = d.num_facilities();
  std::vector<std::vector<FacilityIdx>> rankings(d.num_agents());
  for (std::size_t i = 0; i < d.num_agents(); ++i) {
    auto& r = rankings[i];
    r.resize(m);
    std::iota(r.begin(), r.end(), FacilityIdx{0});
    std::stable_sort(r.begin(), r.end(), [&](FacilityIdx a, FacilityIdx b) { return d(i, a) < d(i, b); });
  }
  return PreferenceProfile::full(m, std::move(rankings));
}

bool check_consistency(const PreferenceProfile& profile, const FullMetric& d, double tol) {
  if (profile.num_agents() != d.num_agents() || profile.num_facilities() != d.num_facilities()) {
    throw InputError("profile and metric dimensions disagree");
  }
  const double eps = scaled_tolerance(tol, d.agent_facility().max_abs());
  for (std::size_t i = 0; i < profile.num_agents(); ++i) {
    auto r = profile.ranking(i);
    if (profile.is_top_only()) {
      for (std::size_t f = 0; f < d.num_facilities(); ++f)
        if (d(i, r[0]) > d(i, f) + eps) return false;
      continue;
    }
    for (std::size_t k = 0; k + 1 < r.size(); ++k)
      if (d(i, r[k]) > d(i, r[k + 1]) + eps) return false;
  }
  return true;
}

ProjectedAgents::ProjectedAgents(std::vector<FacilityIdx> tops, FacilityDistances l)
    : tops_(std::move(tops)), l_(std::move(l)) {
  for (FacilityIdx t : tops_)
    if (t >= l_.size()) throw InputError("projected agent placed on unknown facility");
}

Matrix ProjectedAgents::cost_matrix() const {
  Matrix c(num_agents(), num_facilities());
  for (std::size_t i = 0; i < num_agents(); ++i)
    for (std::size_t f = 0; f < num_facilities(); ++f) c(i, f) = distance(i, f);
  return c;
}

ProjectedAgents project_agents(const PreferenceProfile& profile, const FacilityDistances& l) {
  if (profile.num_facilities() != l.size()) throw InputError("profile and facility distances disagree on m");
  std::vector<FacilityIdx> tops;
  tops.reserve(profile.num_agents());
  for (std::size_t i = 0; i < profile.num_agents(); ++i) {
    if (profile.ranking(i).empty()) throw InputError("agent " + std::to_string(i) + " has an empty ranking");
    tops.push_back(profile.top(i));
  }
  return ProjectedAgents(std::move(tops), l);
}

bool ConsistencyConstraintSet::satisfied_by(const Matrix& d, double tol) const {
  if (d.rows() != n_ || d.cols() != m_) return false;
  double magnitude = d.max_abs();
  for (const auto& p : pairs_) magnitude = std::max(magnitude, p.distance);
  const double eps = scaled_tolerance(tol, magnitude);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t f = 0; f < m_; ++f)
      if (d(i, f) < -eps) return false;
  for (const auto& c : chains_)
    if (d(c.agent, c.closer) > d(c.agent, c.farther) + eps) return false;
  for (const auto& p : pairs_) {
    const double x = d(p.agent, p.a), y = d(p.agent, p.b);
    if (p.kind == PairConstraint::Kind::DifferenceAtMost) {
      if (std::abs(x - y) > p.distance + eps) return false;
    } else if (x + y < p.distance - eps) {
      return false;
    }
  }
  return true;
}

ConsistencyConstraintSet consistency_constraints(const PreferenceProfile& profile, const FacilityDistances& l) {
  if (profile.num_facilities() != l.size()) throw InputError("profile and facility distances disagree on m");
  ConsistencyConstraintSet set;
  set.n_ = profile.num_agents();
  set.m_ = l.size();
  for (std::size_t i = 0; i < set.n_; ++i) {
    auto r = profile.ranking(i);
    if (profile.is_top_only()) {
      for (std::size_t f = 0; f < set.m_; ++f)
        if (f != r[0]) set.chains_.push_back({i, r[0], f});
    } else {
      for (std::size_t k = 0; k + 1 < r.size(); ++k) set.chains_.push_back({i, r[k], r[k + 1]});
    }
    for (std::size_t a = 0; a < set.m_; ++a) {
      for (std::size_t b = a + 1; b < set.m_; ++b) {
        set.pairs_.push_back({PairConstraint::Kind::DifferenceAtMost, i, a, b, l(a, b)});
        set.pairs_.push_back({PairConstraint::Kind::SumAtLeast, i, a, b, l(a, b)});
      }
    }
    set.chain_start_.push_back(set.chains_.size());
    set.pair_start_.push_back(set.pairs_.size());
  }
  return set;
}

}  // namespace odist
