#include "odist/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace odist {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- Instance

const FacilityDistances& Instance::distances() const {
  if (!facility_distances) {
    throw InputError("instance '" + name + "' has only ordinal candidate rankings; this operation needs "
                     "numeric facility_distances");
  }
  return *facility_distances;
}

DistancePartialOrder Instance::partial_order() const {
  if (facility_distances) return DistancePartialOrder::from_distances(*facility_distances);
  if (candidate_rankings) return DistancePartialOrder::from_rankings(*candidate_rankings);
  throw InputError("instance '" + name + "' has neither facility_distances nor candidate_rankings");
}

FullMetric Instance::full_metric() const {
  if (!true_metric) throw InputError("instance '" + name + "' has no true_metric");
  return FullMetric(*true_metric, distances());
}

void Instance::validate() const {
  const std::size_t m = facilities.size();
  if (preferences.num_facilities() != m) throw InputError("preferences rank a different number of facilities");
  if (!facility_distances && !candidate_rankings) {
    throw InputError("instance needs facility_distances or candidate_rankings");
  }
  if (facility_distances && facility_distances->size() != m) {
    throw InputError("facility_distances is not " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (candidate_rankings) (void)DistancePartialOrder::from_rankings(*candidate_rankings);
  if (true_metric) {
    if (true_metric->rows() != num_agents()) throw InputError("true_metric needs one row per agent");
    const FullMetric d = full_metric();
    if (!check_consistency(preferences, d)) throw InputError("true_metric contradicts the agents' rankings");
  }
  for (const auto& s : scenarios) {
    if (s.facility_distances.size() != m) throw InputError("scenario '" + s.label + "' has the wrong l size");
    if (s.true_metric) {
      if (s.true_metric->rows() != num_agents()) {
        throw InputError("scenario '" + s.label + "' metric needs one row per agent");
      }
      const FullMetric d(*s.true_metric, s.facility_distances);
      if (!check_consistency(preferences, d)) {
        throw InputError("scenario '" + s.label + "' metric contradicts the agents' rankings");
      }
    }
    if (s.assignment) {
      if (s.assignment->size() != num_agents()) throw InputError("scenario '" + s.label + "' assignment length");
      for (FacilityIdx f : *s.assignment)
        if (f >= m) throw InputError("scenario '" + s.label + "' assigns an unknown facility");
    }
  }
  if (problem.preset != Preset::SocialChoiceMedian) (void)build_problem(problem, num_agents(), m);
}

// ----------------------------------------------------------------- parsing

namespace {

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    require_object();
    auto it = node_.find(key);
    if (it == node_.end()) Reader(node_, join(key)).fail("missing");
    return Reader(*it, join(key));
  }
  std::optional<Reader> find(const std::string& key) const {
    require_object();
    auto it = node_.find(key);
    if (it == node_.end() || it->is_null()) return std::nullopt;
    return Reader(*it, join(key));
  }
  Reader operator[](std::size_t i) const { return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  void require_object() const {
    if (!node_.is_object()) fail("expected an object");
  }
  std::size_t array_size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }
  void allow_keys(std::initializer_list<std::string_view> keys) const {
    require_object();
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      bool ok = false;
      for (auto k : keys) ok = ok || k == it.key();
      if (!ok) Reader(it.value(), join(it.key())).fail("unknown field");
    }
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }
  double number() const {
    if (!node_.is_number()) fail("expected a number");
    const double v = node_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  std::size_t index() const {
    if (!node_.is_number_integer() && !node_.is_number_unsigned()) fail("expected a nonnegative integer");
    if (node_.is_number_integer() && node_.get<std::int64_t>() < 0) fail("expected a nonnegative integer");
    return node_.get<std::size_t>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& node_;
  std::string path_;
};

// Wraps validation failures of a sub-object with its field path.
template <class Fn>
auto with_path(const Reader& r, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const InputError& e) {
    r.fail(e.what());
  }
}

Matrix read_matrix(const Reader& r, std::optional<std::size_t> rows, std::optional<std::size_t> cols) {
  const std::size_t nr = r.array_size();
  if (rows && nr != *rows) r.fail("expected " + std::to_string(*rows) + " rows, got " + std::to_string(nr));
  std::optional<std::size_t> width = cols;
  std::vector<std::vector<double>> data;
  for (std::size_t i = 0; i < nr; ++i) {
    const Reader row = r[i];
    const std::size_t nc = row.array_size();
    if (width && nc != *width) row.fail("expected " + std::to_string(*width) + " entries, got " + std::to_string(nc));
    width = nc;
    std::vector<double> values;
    for (std::size_t j = 0; j < nc; ++j) values.push_back(row[j].number());
    data.push_back(std::move(values));
  }
  if (nr == 0) return Matrix(0, cols.value_or(0));
  return Matrix::from_rows(data);
}

FacilityIdx read_facility(const Reader& r, const FacilitySet& fs) {
  const std::string name = r.string();
  auto f = fs.find(name);
  if (!f) r.fail("unknown facility '" + name + "'");
  return *f;
}

std::vector<FacilityIdx> read_facility_list(const Reader& r, const FacilitySet& fs) {
  std::vector<FacilityIdx> out;
  const std::size_t n = r.array_size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(read_facility(r[i], fs));
  return out;
}

PreferenceProfile read_preferences(const Reader& r, const FacilitySet& fs) {
  r.allow_keys({"mode", "groups", "rankings", "tops"});
  const std::string mode = r.at("mode").string();
  if (mode != "full" && mode != "top_only") r.at("mode").fail("expected \"full\" or \"top_only\"");
  const bool top_only = mode == "top_only";
  std::vector<std::vector<FacilityIdx>> rankings;
  std::vector<FacilityIdx> tops;
  if (auto groups = r.find("groups")) {
    const std::size_t ng = groups->array_size();
    for (std::size_t g = 0; g < ng; ++g) {
      const Reader item = (*groups)[g];
      item.allow_keys({"count", "ranking", "top"});
      const std::size_t count = item.at("count").index();
      if (count == 0) item.at("count").fail("must be positive");
      if (top_only) {
        const FacilityIdx t = read_facility(item.at("top"), fs);
        tops.insert(tops.end(), count, t);
      } else {
        const Reader rk = item.at("ranking");
        const auto ranking = read_facility_list(rk, fs);
        with_path(rk, [&] { return PreferenceProfile::full(fs.size(), {ranking}); });
        rankings.insert(rankings.end(), count, ranking);
      }
    }
  } else if (!top_only) {
    const Reader list = r.at("rankings");
    const std::size_t n = list.array_size();
    for (std::size_t i = 0; i < n; ++i) {
      rankings.push_back(read_facility_list(list[i], fs));
      with_path(list[i], [&] { return PreferenceProfile::full(fs.size(), {rankings.back()}); });
    }
  } else {
    tops = read_facility_list(r.at("tops"), fs);
  }
  if (top_only) return with_path(r, [&] { return PreferenceProfile::top_only(fs.size(), tops); });
  return with_path(r, [&] { return PreferenceProfile::full(fs.size(), rankings); });
}

std::pair<AgentIdx, AgentIdx> read_agent_pair(const Reader& r) {
  if (r.array_size() != 2) r.fail("expected a pair of agent indices");
  return {r[0].index(), r[1].index()};
}

ProblemSpec read_problem(const Reader& r, std::size_t m) {
  r.allow_keys({"preset", "k", "capacities", "opening_costs", "together", "apart", "penalties"});
  ProblemSpec spec;
  const Reader preset = r.at("preset");
  spec.preset = with_path(preset, [&] { return parse_preset(preset.string()); });
  if (auto k = r.find("k")) spec.k = k->index();
  if (auto caps = r.find("capacities")) {
    const std::size_t c = caps->array_size();
    if (c != m) caps->fail("expected one capacity per facility");
    for (std::size_t f = 0; f < c; ++f) spec.capacities.push_back((*caps)[f].index());
  }
  if (auto costs = r.find("opening_costs")) {
    const std::size_t c = costs->array_size();
    if (c != m) costs->fail("expected one opening cost per facility");
    for (std::size_t f = 0; f < c; ++f) {
      const double v = (*costs)[f].number();
      if (v < 0.0) (*costs)[f].fail("opening costs must be nonnegative");
      spec.opening_costs.push_back(v);
    }
  }
  for (auto [key, target] : {std::pair{"together", &spec.together}, std::pair{"apart", &spec.apart}}) {
    if (auto list = r.find(key)) {
      const std::size_t c = list->array_size();
      for (std::size_t i = 0; i < c; ++i) target->push_back(read_agent_pair((*list)[i]));
    }
  }
  if (auto pens = r.find("penalties")) {
    const std::size_t c = pens->array_size();
    for (std::size_t i = 0; i < c; ++i) {
      const Reader p = (*pens)[i];
      p.allow_keys({"agents", "penalty"});
      auto [a, b] = read_agent_pair(p.at("agents"));
      const double v = p.at("penalty").number();
      if (v < 0.0) p.at("penalty").fail("penalties must be nonnegative");
      spec.penalties.push_back({a, b, v});
    }
  }
  return spec;
}

FacilityDistances read_distances(const Reader& r, std::size_t m) {
  Matrix l = read_matrix(r, m, m);
  return with_path(r, [&] { return FacilityDistances(std::move(l)); });
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  const Reader root(doc, "");
  root.allow_keys({"format", "version", "name", "parameters", "facilities", "facility_distances",
                   "candidate_rankings", "preferences", "problem", "true_metric", "scenarios"});
  if (root.at("format").string() != kInstanceFormat) {
    root.at("format").fail("expected \"" + std::string(kInstanceFormat) + "\"");
  }
  if (root.at("version").index() != static_cast<std::size_t>(kFormatVersion)) {
    root.at("version").fail("unsupported version");
  }
  Instance in;
  if (auto name = root.find("name")) in.name = name->string();
  if (auto params = root.find("parameters")) {
    params->require_object();
    for (auto it = params->node().begin(); it != params->node().end(); ++it)
      in.parameters[it.key()] = params->at(it.key()).number();
  }
  const Reader fac = root.at("facilities");
  std::vector<std::string> names;
  for (std::size_t f = 0, c = fac.array_size(); f < c; ++f) names.push_back(fac[f].string());
  in.facilities = with_path(fac, [&] { return FacilitySet(names); });
  const std::size_t m = in.facilities.size();

  if (auto l = root.find("facility_distances")) in.facility_distances = read_distances(*l, m);
  if (auto cr = root.find("candidate_rankings")) {
    cr->require_object();
    CandidateRankings rankings(m);
    std::vector<char> seen(m, 0);
    for (auto it = cr->node().begin(); it != cr->node().end(); ++it) {
      const Reader entry = cr->at(it.key());
      auto f = in.facilities.find(it.key());
      if (!f) entry.fail("unknown facility");
      rankings[*f] = read_facility_list(entry, in.facilities);
      seen[*f] = 1;
    }
    for (FacilityIdx f = 0; f < m; ++f)
      if (!seen[f]) cr->fail("missing ranking for facility '" + in.facilities.name(f) + "'");
    with_path(*cr, [&] { return DistancePartialOrder::from_rankings(rankings); });
    in.candidate_rankings = std::move(rankings);
  }
  if (!in.facility_distances && !in.candidate_rankings) {
    root.fail("needs facility_distances or candidate_rankings");
  }
  in.preferences = read_preferences(root.at("preferences"), in.facilities);
  if (auto p = root.find("problem")) in.problem = read_problem(*p, m);
  if (auto d = root.find("true_metric")) in.true_metric = read_matrix(*d, in.num_agents(), m);
  if (auto sc = root.find("scenarios")) {
    for (std::size_t i = 0, c = sc->array_size(); i < c; ++i) {
      const Reader s = (*sc)[i];
      s.allow_keys({"label", "facility_distances", "true_metric", "assignment"});
      Scenario scenario{s.at("label").string(), read_distances(s.at("facility_distances"), m), std::nullopt,
                        std::nullopt};
      if (auto d = s.find("true_metric")) scenario.true_metric = read_matrix(*d, in.num_agents(), m);
      if (auto a = s.find("assignment")) {
        scenario.assignment = read_facility_list(*a, in.facilities);
        if (scenario.assignment->size() != in.num_agents()) a->fail("expected one facility per agent");
      }
      in.scenarios.push_back(std::move(scenario));
    }
  }
  with_path(root, [&] {
    in.validate();
    return 0;
  });
  return in;
}

// ----------------------------------------------------------- serializing

namespace {

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json names_json(std::span<const FacilityIdx> list, const FacilitySet& fs) {
  ordered_json out = ordered_json::array();
  for (FacilityIdx f : list) out.push_back(fs.name(f));
  return out;
}

ordered_json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json instance_json(const Instance& in) {
  ordered_json j;
  j["format"] = kInstanceFormat;
  j["version"] = kFormatVersion;
  j["name"] = in.name;
  if (!in.parameters.empty()) {
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : in.parameters) p[k] = v;
    j["parameters"] = p;
  }
  j["facilities"] = in.facilities.names();
  if (in.facility_distances) j["facility_distances"] = matrix_json(in.facility_distances->matrix());
  if (in.candidate_rankings) {
    ordered_json cr = ordered_json::object();
    for (FacilityIdx f = 0; f < in.candidate_rankings->size(); ++f)
      cr[in.facilities.name(f)] = names_json((*in.candidate_rankings)[f], in.facilities);
    j["candidate_rankings"] = cr;
  }
  ordered_json prefs;
  prefs["mode"] = in.preferences.is_top_only() ? "top_only" : "full";
  ordered_json groups = ordered_json::array();
  const auto& rankings = in.preferences.rankings();
  for (std::size_t i = 0; i < rankings.size();) {
    std::size_t e = i;
    while (e < rankings.size() && rankings[e] == rankings[i]) ++e;
    ordered_json g;
    g["count"] = e - i;
    if (in.preferences.is_top_only()) {
      g["top"] = in.facilities.name(rankings[i].front());
    } else {
      g["ranking"] = names_json(rankings[i], in.facilities);
    }
    groups.push_back(std::move(g));
    i = e;
  }
  prefs["groups"] = groups;
  j["preferences"] = prefs;
  const ProblemSpec& p = in.problem;
  ordered_json prob;
  prob["preset"] = to_string(p.preset);
  if (p.k) prob["k"] = *p.k;
  if (!p.capacities.empty()) prob["capacities"] = p.capacities;
  if (!p.opening_costs.empty()) prob["opening_costs"] = p.opening_costs;
  auto pairs = [](const std::vector<std::pair<AgentIdx, AgentIdx>>& v) {
    ordered_json out = ordered_json::array();
    for (auto [a, b] : v) out.push_back({a, b});
    return out;
  };
  if (!p.together.empty()) prob["together"] = pairs(p.together);
  if (!p.apart.empty()) prob["apart"] = pairs(p.apart);
  if (!p.penalties.empty()) {
    ordered_json pens = ordered_json::array();
    for (const auto& pen : p.penalties) {
      ordered_json e;
      e["agents"] = {pen.a, pen.b};
      e["penalty"] = pen.penalty;
      pens.push_back(std::move(e));
    }
    prob["penalties"] = pens;
  }
  j["problem"] = prob;
  if (in.true_metric) j["true_metric"] = matrix_json(*in.true_metric);
  if (!in.scenarios.empty()) {
    ordered_json sc = ordered_json::array();
    for (const auto& s : in.scenarios) {
      ordered_json e;
      e["label"] = s.label;
      e["facility_distances"] = matrix_json(s.facility_distances.matrix());
      if (s.true_metric) e["true_metric"] = matrix_json(*s.true_metric);
      if (s.assignment) e["assignment"] = names_json(*s.assignment, in.facilities);
      sc.push_back(std::move(e));
    }
    j["scenarios"] = sc;
  }
  return j;
}

ordered_json instance_ref(const Instance& in) {
  ordered_json j;
  j["name"] = in.name;
  j["digest"] = instance_digest(in);
  return j;
}

ordered_json outcome_json(const Outcome& o, const FacilitySet& fs) {
  ordered_json j;
  if (o.facility) {
    j["kind"] = "facility";
    j["facility"] = fs.name(*o.facility);
  } else {
    j["kind"] = "assignment";
    j["assignment"] = names_json(o.assignment, fs);
  }
  return j;
}

ordered_json audit_json(const AuditReport& a, const FacilitySet& fs) {
  ordered_json j;
  j["objective"] = to_string(a.objective);
  if (a.objective == AuditObjective::Percentile) j["alpha"] = a.alpha;
  j["distortion"] = number_or_inf(a.distortion);
  j["exact"] = a.exact;
  j["method"] = a.exact ? "lp" : "sampled";
  if (!a.exact) {
    j["samples"] = a.samples;
    if (a.seed) j["seed"] = *a.seed;
  }
  if (a.witness) {
    ordered_json w;
    w["agent_facility"] = matrix_json(*a.witness);
    w["ratio"] = number_or_inf(a.witness_ratio);
    w["has_ties"] = a.witness_has_ties;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  ordered_json breakdown = ordered_json::array();
  for (const auto& alt : a.breakdown) {
    ordered_json e;
    if (alt.facility) {
      e["alternative"] = fs.name(*alt.facility);
    } else {
      e["alternative"] = names_json(alt.assignment, fs);
    }
    e["value"] = number_or_inf(alt.value);
    breakdown.push_back(std::move(e));
  }
  j["breakdown"] = breakdown;
  return j;
}

}  // namespace

std::string serialize_instance(const Instance& instance) { return instance_json(instance).dump(2) + "\n"; }

std::string instance_digest(const Instance& instance) {
  const std::string text = serialize_instance(instance);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

Instance load_instance(const std::filesystem::path& path) {
  try {
    return parse_instance(read_text(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string serialize_solve_report(const Instance& instance, const SolveReport& r) {
  ordered_json j;
  j["format"] = kSolveReportFormat;
  j["version"] = kFormatVersion;
  j["instance"] = instance_ref(instance);
  j["mechanism"] = r.mechanism;
  j["outcome"] = outcome_json(r.outcome, instance.facilities);
  if (r.solver) {
    ordered_json s;
    s["beta"] = r.solver->beta;
    s["exact"] = r.solver->exact;
    j["solver"] = s;
  }
  ordered_json g;
  g["objective"] = r.guarantee_objective;
  g["bound"] = r.guarantee ? ordered_json(*r.guarantee) : ordered_json(nullptr);
  j["guarantee"] = g;
  if (r.social_choice) {
    const auto& sc = *r.social_choice;
    if (!sc.scores.empty()) j["scores"] = sc.scores;
    j["condorcet"] = sc.condorcet;
    if (!sc.certificate.empty()) {
      ordered_json cert = ordered_json::array();
      for (const auto& e : sc.certificate) {
        ordered_json c;
        c["beats"] = instance.facilities.name(e.beaten);
        c["kind"] = e.kind == EdgeJustification::Kind::Majority ? "majority" : "witness";
        if (e.witness) c["witness"] = instance.facilities.name(*e.witness);
        cert.push_back(std::move(c));
      }
      j["certificate"] = cert;
    }
  }
  if (r.audit) {
    j["audit"] = audit_json(*r.audit, instance.facilities);
  } else {
    j["audit"] = nullptr;
    if (!r.audit_note.empty()) j["audit_note"] = r.audit_note;
  }
  return j.dump(2) + "\n";
}

std::string serialize_audit_report(const Instance& instance, const Outcome& outcome, const AuditReport& report) {
  ordered_json j;
  j["format"] = kAuditReportFormat;
  j["version"] = kFormatVersion;
  j["instance"] = instance_ref(instance);
  j["outcome"] = outcome_json(outcome, instance.facilities);
  const ordered_json body = audit_json(report, instance.facilities);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j.dump(2) + "\n";
}

Outcome parse_report_outcome(std::string_view text, const Instance& instance) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  const Reader root(doc, "");
  const std::string format = root.at("format").string();
  if (format != kSolveReportFormat && format != kAuditReportFormat) root.at("format").fail("not a report");
  const std::string digest = root.at("instance").at("digest").string();
  if (digest != instance_digest(instance)) {
    root.at("instance").at("digest").fail("report was written for a different instance");
  }
  const Reader o = root.at("outcome");
  const std::string kind = o.at("kind").string();
  Outcome out;
  if (kind == "facility") {
    out.facility = read_facility(o.at("facility"), instance.facilities);
  } else if (kind == "assignment") {
    out.assignment = read_facility_list(o.at("assignment"), instance.facilities);
    if (out.assignment.size() != instance.num_agents()) o.at("assignment").fail("expected one facility per agent");
  } else {
    o.at("kind").fail("expected \"facility\" or \"assignment\"");
  }
  return out;
}

}  // namespace odist
