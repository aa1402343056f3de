#include "parpush/scenario.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>

#include "parpush/error.hpp"

namespace parpush {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, (path.empty() ? std::string("/") : path) + ": " + what);
}

void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) schema_error(path, "unknown key '" + key + "'");
  }
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(path, "missing key '" + key + "'");
  return *it;
}

const json& require_array(const json& j, const std::string& key, const std::string& path) {
  const json& a = require(j, key, path);
  if (!a.is_array()) schema_error(path + "/" + key, "expected an array");
  return a;
}

long long get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long long>();
}

int get_small_int(const json& j, const std::string& path) {
  const long long v = get_int(j, path);
  if (v < -(1LL << 30) || v > (1LL << 30)) schema_error(path, "integer out of range");
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

Rational get_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) schema_error(path, "expected a rational \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

Permutation get_permutation(const json& j, int degree, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected a permutation");
  if (j.empty()) return Permutation::identity(degree);
  try {
    const bool cycles = !j.empty() && j.front().is_array();
    if (cycles) {
      std::vector<std::vector<int>> cs;
      for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        if (!j[i].is_array()) schema_error(p, "expected a cycle");
        std::vector<int> c;
        for (std::size_t k = 0; k < j[i].size(); ++k) c.push_back(get_small_int(j[i][k], p + "/" + std::to_string(k)));
        cs.push_back(std::move(c));
      }
      return Permutation::from_cycles(degree, cs);
    }
    std::vector<int> one_line;
    for (std::size_t i = 0; i < j.size(); ++i) one_line.push_back(get_small_int(j[i], path + "/" + std::to_string(i)));
    return Permutation::from_one_line(one_line);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    schema_error(path, e.what());
  }
}

std::vector<FlagStep> get_steps(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected a list of steps");
  std::vector<FlagStep> steps;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    expect_object(j[i], p, {"dim", "weight"});
    steps.push_back(FlagStep{get_int(require(j[i], "dim", p), p + "/dim"), get_rational(require(j[i], "weight", p), p + "/weight")});
  }
  return steps;
}

WeightedFlag get_flag(const json& j, const std::string& path) {
  auto steps = get_steps(j, path);
  try {
    return WeightedFlag(std::move(steps));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

MarkedCurve get_curve(const json& j, const std::string& path) {
  expect_object(j, path, {"genus", "marked_points"});
  MarkedCurve c;
  c.genus = get_small_int(require(j, "genus", path), path + "/genus");
  if (c.genus < 0) schema_error(path + "/genus", "genus must be non-negative");
  const json& pts = require_array(j, "marked_points", path);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::string label = get_string(pts[i], path + "/marked_points/" + std::to_string(i));
    if (!seen.insert(label).second) schema_error(path + "/marked_points", "label '" + label + "' listed twice");
    c.marked_points.push_back(std::move(label));
  }
  return c;
}

struct Monodromy {
  std::vector<Permutation> handles;
  std::map<std::string, Permutation> branch;
};

Monodromy get_monodromy(const json& j, int degree, const std::string& path) {
  Monodromy m;
  const json& handles = require_array(j, "handles", path);
  for (std::size_t i = 0; i < handles.size(); ++i) {
    m.handles.push_back(get_permutation(handles[i], degree, path + "/handles/" + std::to_string(i)));
  }
  const json& branch = require(j, "branch", path);
  if (!branch.is_object()) schema_error(path + "/branch", "expected an object keyed by point label");
  for (const auto& [label, perm] : branch.items()) {
    m.branch.emplace(label, get_permutation(perm, degree, path + "/branch/" + label));
  }
  return m;
}

CoveringMonodromy get_covering(const json& j, const MarkedCurve& base, const std::string& path) {
  expect_object(j, path, {"degree", "handles", "branch"});
  CoveringMonodromy c;
  c.base = base;
  c.degree = get_small_int(require(j, "degree", path), path + "/degree");
  if (c.degree < 1) schema_error(path + "/degree", "degree must be positive");
  auto m = get_monodromy(j, c.degree, path);
  c.handles = std::move(m.handles);
  c.branch = std::move(m.branch);
  return c;
}

YPoint get_ypoint(const json& j, const CoveringMonodromy& c, const std::string& path) {
  expect_object(j, path, {"over", "sheet", "component"});
  const std::string over = get_string(require(j, "over", path), path + "/over");
  const int sheet = get_small_int(require(j, "sheet", path), path + "/sheet");
  if (!c.base.has_point(over)) {
    throw Error(ErrorCode::FlagOverUnmarkedPoint, path + ": '" + over + "' is not a marked point");
  }
  if (sheet < 1 || sheet > c.degree) schema_error(path + "/sheet", "sheet out of range");
  const YPoint y = canonical_point(c, over, sheet - 1);
  if (auto it = j.find("component"); it != j.end() && get_int(*it, path + "/component") != y.component) {
    schema_error(path + "/component", "sheet " + std::to_string(sheet) + " lies on component " + std::to_string(y.component));
  }
  return y;
}

UpstairsBundle get_upstairs(const json& j, const CoveringMonodromy& c, const std::string& path) {
  expect_object(j, path, {"components", "flags"});
  UpstairsBundle u;
  u.covering = c;
  const auto comps = components(c);
  const json& cs = require_array(j, "components", path);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string p = path + "/components/" + std::to_string(i);
    expect_object(cs[i], p, {"rank", "degree", "sheets"});
    u.components.push_back(ComponentBundle{get_int(require(cs[i], "rank", p), p + "/rank"),
                                           get_int(require(cs[i], "degree", p), p + "/degree")});
    if (auto it = cs[i].find("sheets"); it != cs[i].end() && i < comps.size()) {
      std::vector<int> sheets;
      for (int s : comps[i].sheets) sheets.push_back(s + 1);
      if (*it != json(sheets)) schema_error(p + "/sheets", "does not match the covering's component order");
    }
  }
  if (u.components.size() != comps.size()) {
    schema_error(path + "/components", "covering has " + std::to_string(comps.size()) + " components");
  }
  if (auto it = j.find("flags"); it != j.end()) {
    if (!it->is_array()) schema_error(path + "/flags", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = path + "/flags/" + std::to_string(i);
      expect_object((*it)[i], p, {"point", "steps"});
      const YPoint y = get_ypoint(require((*it)[i], "point", p), c, p + "/point");
      if (!u.flags.emplace(y, get_flag(require((*it)[i], "steps", p), p + "/steps")).second) {
        schema_error(p, "second flag at the same point");
      }
    }
  }
  check_well_formed(u);
  return u;
}

ParabolicBundle get_downstairs(const json& j, const MarkedCurve& base, const std::string& path) {
  expect_object(j, path, {"rank", "degree", "flags"});
  ParabolicBundle e;
  e.curve = base;
  e.rank = get_int(require(j, "rank", path), path + "/rank");
  e.degree = get_int(require(j, "degree", path), path + "/degree");
  if (auto it = j.find("flags"); it != j.end()) {
    if (!it->is_array()) schema_error(path + "/flags", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = path + "/flags/" + std::to_string(i);
      expect_object((*it)[i], p, {"point", "steps"});
      const std::string label = get_string(require((*it)[i], "point", p), p + "/point");
      if (!e.flags.emplace(label, get_flag(require((*it)[i], "steps", p), p + "/steps")).second) {
        schema_error(p, "second flag at '" + label + "'");
      }
    }
  }
  check_well_formed(e);
  return e;
}

RamifiedTorusData get_torus(const json& j, const MarkedCurve& base, const std::string& path) {
  expect_object(j, path, {"block_ranks", "handles", "branch", "orbit_degrees", "fiber_splitting"});
  RamifiedTorusData t;
  t.base = base;
  const json& ranks = require_array(j, "block_ranks", path);
  for (std::size_t i = 0; i < ranks.size(); ++i) t.block_ranks.push_back(get_int(ranks[i], path + "/block_ranks/" + std::to_string(i)));
  auto m = get_monodromy(j, static_cast<int>(t.block_ranks.size()), path);
  t.handles = std::move(m.handles);
  t.branch = std::move(m.branch);
  if (auto it = j.find("orbit_degrees"); it != j.end()) {
    if (!it->is_array()) schema_error(path + "/orbit_degrees", "expected an array");
    std::vector<long long> degrees;
    for (std::size_t i = 0; i < it->size(); ++i) degrees.push_back(get_int((*it)[i], path + "/orbit_degrees/" + std::to_string(i)));
    t.orbit_degrees = std::move(degrees);
  }
  if (auto it = j.find("fiber_splitting"); it != j.end()) {
    if (!it->is_array()) schema_error(path + "/fiber_splitting", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = path + "/fiber_splitting/" + std::to_string(i);
      expect_object((*it)[i], p, {"point", "cycles"});
      const std::string label = get_string(require((*it)[i], "point", p), p + "/point");
      std::vector<CycleSplit> splits;
      const json& cycles = require_array((*it)[i], "cycles", p);
      for (std::size_t k = 0; k < cycles.size(); ++k) {
        const std::string q = p + "/cycles/" + std::to_string(k);
        expect_object(cycles[k], q, {"sheet", "steps"});
        splits.push_back(CycleSplit{get_small_int(require(cycles[k], "sheet", q), q + "/sheet") - 1,
                                    get_steps(require(cycles[k], "steps", q), q + "/steps")});
      }
      if (!t.fiber_splitting.emplace(label, std::move(splits)).second) schema_error(p, "point listed twice");
    }
  }
  return t;
}

// A residues section attaches a connection to every bundle present (points
// left out carry zero residue), plus any side its entries name.
void get_residues(const json& j, Scenario& s, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  if (s.upstairs) s.residues_up.emplace();
  if (s.downstairs) s.residues_down.emplace();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    expect_object(j[i], p, {"point", "eigenvalues"});
    const json& eig_json = require_array(j[i], "eigenvalues", p);
    std::vector<Rational> eig;
    for (std::size_t k = 0; k < eig_json.size(); ++k) eig.push_back(get_rational(eig_json[k], p + "/eigenvalues/" + std::to_string(k)));
    const json& point = require(j[i], "point", p);
    if (point.is_string()) {
      if (!s.residues_down) s.residues_down.emplace();
      if (!s.residues_down->emplace(point.get<std::string>(), std::move(eig)).second) schema_error(p, "point listed twice");
    } else {
      if (!s.covering) throw Error(ErrorCode::MissingSection, p + ": residues on Y need a covering section");
      const YPoint y = get_ypoint(point, *s.covering, p + "/point");
      if (!s.residues_up) s.residues_up.emplace();
      if (!s.residues_up->emplace(y, std::move(eig)).second) schema_error(p, "point listed twice");
    }
  }
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, line_column(text, e.byte) + ": malformed JSON");
  }
  expect_object(doc, "", {"version", "base", "covering", "upstairs", "downstairs", "residues", "torus", "command", "result"});
  if (get_string(require(doc, "version", ""), "/version") != kFormatVersion) {
    schema_error("/version", "expected \"" + std::string(kFormatVersion) + "\"");
  }

  Scenario s;
  s.base = get_curve(require(doc, "base", ""), "/base");
  if (auto it = doc.find("covering"); it != doc.end()) s.covering = get_covering(*it, s.base, "/covering");
  if (auto it = doc.find("upstairs"); it != doc.end()) {
    if (!s.covering) throw Error(ErrorCode::MissingSection, "/upstairs: needs a covering section");
    s.upstairs = get_upstairs(*it, *s.covering, "/upstairs");
  }
  if (auto it = doc.find("downstairs"); it != doc.end()) s.downstairs = get_downstairs(*it, s.base, "/downstairs");
  if (auto it = doc.find("torus"); it != doc.end()) s.torus = get_torus(*it, s.base, "/torus");
  if (auto it = doc.find("residues"); it != doc.end()) get_residues(*it, s, "/residues");
  return s;
}

namespace io {

json rational(const Rational& r) { return r.to_string(); }

json permutation(const Permutation& p) { return p.one_line(); }

json point(const YPoint& y) { return json{{"component", y.component}, {"over", y.over}, {"sheet", y.sheet + 1}}; }

json steps(const std::vector<FlagStep>& steps) {
  json out = json::array();
  for (const auto& s : steps) out.push_back(json{{"dim", s.dim}, {"weight", rational(s.weight)}});
  return out;
}

json bundle(const ParabolicBundle& e) {
  json flags = json::array();
  for (const auto& label : e.curve.marked_points) {
    if (auto it = e.flags.find(label); it != e.flags.end()) {
      flags.push_back(json{{"point", label}, {"steps", steps(it->second.steps())}});
    }
  }
  return json{{"rank", e.rank}, {"degree", e.degree}, {"flags", flags}};
}

namespace {

json eigenvalues(const std::vector<Rational>& eig) {
  json out = json::array();
  for (const auto& e : eig) out.push_back(rational(e));
  return out;
}

json monodromy(const std::vector<Permutation>& handles, const std::map<std::string, Permutation>& branch) {
  json hs = json::array();
  for (const auto& h : handles) hs.push_back(permutation(h));
  json br = json::object();
  for (const auto& [label, p] : branch) br[label] = permutation(p);
  return json{{"handles", hs}, {"branch", br}};
}

}  // namespace

json residues(const ResidueData& down, const UpstairsResidues& up) {
  json out = json::array();
  for (const auto& [label, eig] : down) out.push_back(json{{"point", label}, {"eigenvalues", eigenvalues(eig)}});
  for (const auto& [y, eig] : up) out.push_back(json{{"point", point(y)}, {"eigenvalues", eigenvalues(eig)}});
  return out;
}

json torus(const RamifiedTorusData& t) {
  json out = monodromy(t.handles, t.branch);
  out["block_ranks"] = t.block_ranks;
  if (t.orbit_degrees) out["orbit_degrees"] = *t.orbit_degrees;
  if (!t.fiber_splitting.empty()) {
    json splitting = json::array();
    for (const auto& label : t.base.marked_points) {
      auto it = t.fiber_splitting.find(label);
      if (it == t.fiber_splitting.end()) continue;
      json cycles = json::array();
      for (const auto& c : it->second) cycles.push_back(json{{"sheet", c.sheet + 1}, {"steps", steps(c.pieces)}});
      splitting.push_back(json{{"point", label}, {"cycles", cycles}});
    }
    out["fiber_splitting"] = splitting;
  }
  return out;
}

json assignment(const ReconstructionResult& rec) {
  json points = json::array();
  for (const auto& label : rec.covering.base.marked_points) {
    auto it = rec.assignment.find(label);
    if (it == rec.assignment.end()) continue;
    json pieces = json::array();
    for (const auto& a : it->second) {
      pieces.push_back(json{{"weight", rational(a.weight)},
                            {"dim", a.dim},
                            {"upstairs_point", point(a.point)},
                            {"level", a.level},
                            {"upstairs_weight", rational(a.upstairs_weight)}});
    }
    points.push_back(json{{"point", label}, {"pieces", pieces}});
  }
  return json{{"assignment", points}, {"ambiguous_points", rec.ambiguous_points}};
}

}  // namespace io

json to_json(const Scenario& s) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["base"] = json{{"genus", s.base.genus}, {"marked_points", s.base.marked_points}};
  if (s.covering) {
    json c = json{{"degree", s.covering->degree}};
    c["handles"] = json::array();
    for (const auto& h : s.covering->handles) c["handles"].push_back(io::permutation(h));
    c["branch"] = json::object();
    for (const auto& [label, p] : s.covering->branch) c["branch"][label] = io::permutation(p);
    doc["covering"] = c;
  }
  if (s.upstairs) {
    const auto comps = components(s.upstairs->covering);
    json cs = json::array();
    for (std::size_t k = 0; k < s.upstairs->components.size(); ++k) {
      std::vector<int> sheets;
      for (int sh : comps[k].sheets) sheets.push_back(sh + 1);
      cs.push_back(json{{"rank", s.upstairs->components[k].rank}, {"degree", s.upstairs->components[k].degree}, {"sheets", sheets}});
    }
    json flags = json::array();
    for (const auto& [y, flag] : s.upstairs->flags) flags.push_back(json{{"point", io::point(y)}, {"steps", io::steps(flag.steps())}});
    doc["upstairs"] = json{{"components", cs}, {"flags", flags}};
  }
  if (s.downstairs) doc["downstairs"] = io::bundle(*s.downstairs);
  if (s.residues_down || s.residues_up) {
    doc["residues"] = io::residues(s.residues_down.value_or(ResidueData{}), s.residues_up.value_or(UpstairsResidues{}));
  }
  if (s.torus) doc["torus"] = io::torus(*s.torus);
  return doc;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace parpush
