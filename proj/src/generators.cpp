#include "odist/generators.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>

namespace odist {

namespace {

struct Group {
  std::size_t count;
  std::vector<std::string> ranking;
};

PreferenceProfile profile_from_groups(const FacilitySet& fs, const std::vector<Group>& groups) {
  std::vector<std::vector<FacilityIdx>> rankings;
  for (const auto& g : groups) {
    std::vector<FacilityIdx> r;
    for (const auto& name : g.ranking) r.push_back(fs.index_of(name));
    for (std::size_t c = 0; c < g.count; ++c) rankings.push_back(r);
  }
  return PreferenceProfile::full(fs.size(), std::move(rankings));
}

// Repeats each row block `count` times.
Matrix stack_rows(const std::vector<std::pair<std::size_t, std::vector<double>>>& blocks) {
  std::vector<std::vector<double>> rows;
  for (const auto& [count, row] : blocks)
    for (std::size_t c = 0; c < count; ++c) rows.push_back(row);
  return Matrix::from_rows(rows);
}

class Params {
 public:
  Params(std::string_view example, const std::map<std::string, double>& given, std::set<std::string> allowed)
      : example_(example), given_(given) {
    for (const auto& [key, value] : given) {
      if (!allowed.count(key)) {
        throw InputError("example '" + example_ + "' does not take parameter '" + key + "'");
      }
      if (!std::isfinite(value)) throw InputError("parameter '" + key + "' must be finite");
    }
  }

  double get(const std::string& key, double fallback) {
    auto it = given_.find(key);
    const double v = it == given_.end() ? fallback : it->second;
    used_[key] = v;
    return v;
  }

  std::size_t count(const std::string& key, double fallback) {
    const double v = get(key, fallback);
    if (v < 1 || v != std::floor(v) || v > 1e6) {
      throw InputError("parameter '" + key + "' of '" + example_ + "' must be a positive integer");
    }
    return static_cast<std::size_t>(v);
  }

  double epsilon(double upper) {
    const double v = get("eps", kDefaultEpsilon);
    if (!(v > 0.0 && v < upper)) {
      throw InputError("parameter 'eps' of '" + example_ + "' must lie in (0, " + std::to_string(upper) + ")");
    }
    return v;
  }

  const std::map<std::string, double>& used() const { return used_; }

 private:
  std::string example_;
  const std::map<std::string, double>& given_;
  std::map<std::string, double> used_;
};

Instance sum5_tight(Params& p) {
  const std::size_t q = p.count("q", kDefaultQ);
  const double eps = p.epsilon(0.5);
  Instance in;
  in.facilities = FacilitySet({"W", "Y", "P"});
  in.facility_distances = FacilityDistances(Matrix::from_rows({
      {0.0, 2.0 - 2.0 * eps, 2.0 - eps},
      {2.0 - 2.0 * eps, 0.0, 2.0},
      {2.0 - eps, 2.0, 0.0},
  }));
  in.preferences = profile_from_groups(in.facilities, {
                                                          {q, {"Y", "W", "P"}},
                                                          {q, {"P", "Y", "W"}},
                                                          {1, {"W", "P", "Y"}},
                                                      });
  in.problem.preset = Preset::SocialChoiceSum;
  in.true_metric = stack_rows({
      {q, {2.0 - 2.0 * eps, 0.0, 2.0}},
      {q, {3.0 - 2.0 * eps, 1.0, 1.0}},
      {1, {1.0, 1.0, 1.0}},
  });
  return in;
}

Instance median_topchoice_bad(Params&) {
  Instance in;
  in.facilities = FacilitySet({"W", "X", "Y", "Z"});
  // Cycle W-Y-X-Z-W at distance 2, diagonals W-X and Y-Z at 4.
  in.facility_distances = FacilityDistances(Matrix::from_rows({
      {0, 4, 2, 2},
      {4, 0, 2, 2},
      {2, 2, 0, 4},
      {2, 2, 4, 0},
  }));
  in.preferences = profile_from_groups(in.facilities, {
                                                          {2, {"W", "X", "Y", "Z"}},
                                                          {2, {"X", "Y", "Z", "W"}},
                                                          {2, {"Y", "X", "W", "Z"}},
                                                          {2, {"Z", "X", "W", "Y"}},
                                                      });
  in.problem.preset = Preset::SocialChoiceMedian;
  in.true_metric = stack_rows({
      {2, {100, 102, 102, 102}},
      {2, {5, 1, 3, 3}},
      {2, {3, 1, 1, 3}},
      {2, {3, 1, 3, 1}},
  });
  return in;
}

Instance median_matching_unbounded(Params& p) {
  const double eps = p.epsilon(0.25);
  Instance in;
  in.facilities = FacilitySet({"X", "Y", "Z"});
  FacilityDistances l(Matrix::from_rows({
      {0, 2, 1000},
      {2, 0, 1000},
      {1000, 1000, 0},
  }));
  in.facility_distances = l;
  in.preferences = profile_from_groups(in.facilities, {
                                                          {2, {"X", "Y", "Z"}},
                                                          {1, {"Z", "X", "Y"}},
                                                      });
  in.problem.preset = Preset::MatchingMinCost;
  const std::vector<double> near{2 * eps, 2 + 2 * eps, 1000 + 2 * eps};
  const std::vector<double> mid{1, 1, 1001};
  const std::vector<double> far{1000 + eps, 1000 + eps, eps};
  const Matrix first = Matrix::from_rows({near, mid, far});
  const Matrix second = Matrix::from_rows({mid, near, far});
  in.true_metric = first;
  const Assignment x_star{0, 1, 2};
  in.scenarios.push_back({"a_near_x", l, first, x_star});
  in.scenarios.push_back({"b_near_x", l, second, x_star});
  return in;
}

Instance facility_location_unbounded(Params& p) {
  const double big = p.get("L", kDefaultL);
  if (!(big >= 2.0)) throw InputError("parameter 'L' of 'facility_location_unbounded' must be at least 2");
  const double eps = p.epsilon(1.0);
  Instance in;
  in.facilities = FacilitySet({"X", "Y"});
  FacilityDistances l(Matrix::from_rows({{0, big}, {big, 0}}));
  in.facility_distances = l;
  in.preferences = profile_from_groups(in.facilities, {{1, {"X", "Y"}}, {1, {"Y", "X"}}});
  in.problem.preset = Preset::FacilityLocation;
  in.problem.opening_costs = {1.0, 100.0};
  const Matrix far = Matrix::from_rows({{1, big}, {big, 1}});
  in.true_metric = far;
  in.scenarios.push_back({"open_x_only", l, far, Assignment{0, 0}});
  in.scenarios.push_back({"open_y_only", l, far, Assignment{1, 1}});
  // Everyone within eps of both facilities needs l(X,Y) <= 2 eps.
  FacilityDistances close(Matrix::from_rows({{0, 2 * eps}, {2 * eps, 0}}));
  in.scenarios.push_back({"open_both", close, Matrix(2, 2, eps), Assignment{0, 1}});
  return in;
}

Instance kmedian_lb(Params& p) {
  const std::size_t q = p.count("q", 5);
  const double big = p.get("L", kDefaultL);
  if (!(big >= 2.0)) throw InputError("parameter 'L' of 'kmedian_lb' must be at least 2");
  Instance in;
  in.facilities = FacilitySet({"X", "Y", "Z"});
  FacilityDistances unit(Matrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  FacilityDistances stretched(Matrix::from_rows({{0, 1, big}, {1, 0, big}, {big, big, 0}}));
  in.facility_distances = unit;
  in.preferences = profile_from_groups(in.facilities, {
                                                          {q, {"X", "Y", "Z"}},
                                                          {q, {"Y", "X", "Z"}},
                                                          {1, {"Z", "X", "Y"}},
                                                      });
  in.problem.preset = Preset::KMedian;
  in.problem.k = 2;
  // Every agent sits on its top choice.
  auto on_top = [&](const FacilityDistances& l) {
    std::vector<std::vector<double>> rows;
    for (AgentIdx i = 0; i < in.preferences.num_agents(); ++i) {
      const FacilityIdx t = in.preferences.top(i);
      rows.push_back({l(t, 0), l(t, 1), l(t, 2)});
    }
    return Matrix::from_rows(rows);
  };
  in.true_metric = on_top(unit);
  auto served_by = [&](FacilityIdx a, FacilityIdx b, const FacilityDistances& l) {
    Assignment x;
    for (AgentIdx i = 0; i < in.preferences.num_agents(); ++i) {
      const FacilityIdx t = in.preferences.top(i);
      x.push_back(l(t, b) < l(t, a) ? b : a);
    }
    return x;
  };
  in.scenarios.push_back({"open_x_y", stretched, on_top(stretched), served_by(0, 1, stretched)});
  in.scenarios.push_back({"open_x_z", unit, on_top(unit), served_by(0, 2, unit)});
  in.scenarios.push_back({"open_y_z", unit, on_top(unit), served_by(1, 2, unit)});
  return in;
}

Instance egalitarian_lb(Params& p) {
  const double eps = p.epsilon(1.0);
  Instance in;
  in.facilities = FacilitySet({"X", "Y"});
  FacilityDistances l(Matrix::from_rows({{0, 2}, {2, 0}}));
  in.facility_distances = l;
  in.preferences = profile_from_groups(in.facilities, {{2, {"X", "Y"}}});
  in.problem.preset = Preset::MatchingEgalitarian;
  const Matrix first = Matrix::from_rows({{1, 1}, {eps, 2}});
  const Matrix second = Matrix::from_rows({{eps, 2}, {1, 1}});
  in.true_metric = first;
  in.scenarios.push_back({"agent1_to_x", l, first, Assignment{0, 1}});
  in.scenarios.push_back({"agent1_to_y", l, second, Assignment{1, 0}});
  return in;
}

Instance matching_lb3(Params&) {
  Instance in;
  in.facilities = FacilitySet({"F1", "F2"});
  in.facility_distances = FacilityDistances(Matrix::from_rows({{0, 2}, {2, 0}}));
  in.preferences = profile_from_groups(in.facilities, {{2, {"F1", "F2"}}});
  in.problem.preset = Preset::MatchingMinCost;
  // Agent 1 halfway between the facilities, agent 2 on F1.
  in.true_metric = Matrix::from_rows({{1, 1}, {0, 2}});
  return in;
}

Instance two_candidate_tie(Params&) {
  Instance in;
  in.facilities = FacilitySet({"X", "Y"});
  in.facility_distances = FacilityDistances(Matrix::from_rows({{0, 2}, {2, 0}}));
  in.preferences = profile_from_groups(in.facilities, {{1, {"X", "Y"}}, {1, {"Y", "X"}}});
  in.problem.preset = Preset::SocialChoiceSum;
  in.true_metric = Matrix::from_rows({{1, 1}, {2, 0}});
  return in;
}

struct Entry {
  std::string_view name;
  std::set<std::string> params;
  std::function<Instance(Params&)> build;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"sum5_tight", {"q", "eps"}, sum5_tight},
      {"median_topchoice_bad", {}, median_topchoice_bad},
      {"median_matching_unbounded", {"eps"}, median_matching_unbounded},
      {"facility_location_unbounded", {"L", "eps"}, facility_location_unbounded},
      {"kmedian_lb", {"q", "L"}, kmedian_lb},
      {"egalitarian_lb", {"eps"}, egalitarian_lb},
      {"matching_lb3", {}, matching_lb3},
      {"two_candidate_tie", {}, two_candidate_tie},
  };
  return entries;
}

}  // namespace

std::vector<std::string> paper_example_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

Instance gen_paper_example(std::string_view name, const std::map<std::string, double>& params) {
  for (const auto& e : registry()) {
    if (e.name != name) continue;
    Params p(name, params, e.params);
    Instance in = e.build(p);
    in.name = std::string(name);
    in.parameters = p.used();
    in.validate();
    return in;
  }
  std::string known;
  for (const auto& n : paper_example_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown example '" + std::string(name) + "' (known: " + known + ")");
}

std::map<std::string, double> parse_params(std::string_view text) {
  std::map<std::string, double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InputError("parameter '" + std::string(item) + "' is not of the form key=value");
    }
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw InputError("parameter '" + key + "' has a non-numeric value '" + value + "'");
    }
    out[key] = v;
  }
  return out;
}

}  // namespace odist
