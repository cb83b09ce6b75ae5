#include "urysohn/serialize.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "urysohn/error.hpp"

namespace urysohn {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail_parse(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) fail_parse(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<std::string> labels_from_json(const Json& j, const char* what) {
  if (!j.is_array()) fail_parse(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail_parse(std::string(what) + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::uint64_t unsigned_from_json(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail_parse(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Json labelled_sets(const std::vector<std::string>& source, const std::vector<std::string>& target,
                   const std::vector<std::vector<std::size_t>>& sets) {
  Json out = Json::object();
  for (std::size_t i = 0; i < source.size(); ++i) {
    Json arr = Json::array();
    for (const auto t : sets[i]) arr.push_back(target[t]);
    out[source[i]] = std::move(arr);
  }
  return out;
}

Json optional_map(const std::optional<std::vector<std::size_t>>& map, const std::vector<std::string>& source,
                  const std::vector<std::string>& target) {
  return map ? map_to_json(source, target, *map) : Json(nullptr);
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) fail_parse("rational must be a string \"p/q\"");
  return Rational::parse(j.get<std::string>());
}

Json to_json(const EquidistributedAlgebra& a) {
  return Json{{"atoms", a.atoms()}, {"measure", to_json(a.atom_measure())}};
}

EquidistributedAlgebra algebra_from_json(const Json& j, bool check_measure) {
  auto atoms = labels_from_json(field(j, "atoms"), "atoms");
  if (atoms.empty()) fail_parse("an algebra needs at least one atom");
  EquidistributedAlgebra a(std::move(atoms));
  if (check_measure && j.contains("measure") && rational_from_json(j["measure"]) != a.atom_measure()) {
    fail_parse("measure " + j["measure"].get<std::string>() + " differs from 1/" + std::to_string(a.size()));
  }
  return a;
}

Json to_json(const SubalgebraInclusion& inc) {
  return Json{{"sub", to_json(inc.sub)},
              {"super", to_json(inc.super)},
              {"block_map", map_to_json(inc.super.atoms(), inc.sub.atoms(), inc.block_map)}};
}

SubalgebraInclusion inclusion_from_json(const Json& j) {
  auto sub = algebra_from_json(field(j, "sub"));
  auto super = algebra_from_json(field(j, "super"));
  auto block_map = map_from_json(field(j, "block_map"), super.atoms(), sub.atoms());
  return SubalgebraInclusion(std::move(sub), std::move(super), std::move(block_map));
}

Json to_json(const AlgebraAutomorphism& g) {
  return Json{{"algebra", to_json(g.algebra)}, {"map", map_to_json(g.algebra.atoms(), g.algebra.atoms(), g.perm.image())}};
}

AlgebraAutomorphism automorphism_from_json(const Json& j) {
  auto algebra = algebra_from_json(field(j, "algebra"));
  auto map = map_from_json(field(j, "map"), algebra.atoms(), algebra.atoms());
  return AlgebraAutomorphism(std::move(algebra), Permutation(std::move(map)));
}

Json to_json(const FiniteMetricSpace& s) {
  Json dist = Json::array();
  for (const auto& row : s.dist()) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.str());
    dist.push_back(std::move(r));
  }
  return Json{{"points", s.points()}, {"dist", std::move(dist)}};
}

FiniteMetricSpace space_from_json(const Json& j) {
  auto points = labels_from_json(field(j, "points"), "points");
  const Json& dist = field(j, "dist");
  if (!dist.is_array()) fail_parse("dist must be an array of rows");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : dist) {
    if (!row.is_array()) fail_parse("dist must be an array of rows");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_from_json(v));
    rows.push_back(std::move(r));
  }
  if (rows.size() != points.size()) fail_parse("dist has " + std::to_string(rows.size()) + " rows for " +
                                                std::to_string(points.size()) + " points");
  for (const auto& r : rows) {
    if (r.size() != points.size()) fail_parse("dist is not square");
  }
  try {
    return FiniteMetricSpace(std::move(points), std::move(rows));
  } catch (const Error& e) {
    fail_parse(e.what());
  }
}

Json to_json(const Isometry& g) {
  return Json{{"space", to_json(g.space)}, {"map", map_to_json(g.space.points(), g.space.points(), g.perm.image())}};
}

Isometry isometry_from_json(const Json& j) {
  auto space = space_from_json(field(j, "space"));
  auto map = map_from_json(field(j, "map"), space.points(), space.points());
  return Isometry(std::move(space), Permutation(std::move(map)));
}

Json to_json(const IsometricEmbedding& e) {
  return Json{{"source", to_json(e.source)},
              {"target", to_json(e.target)},
              {"map", map_to_json(e.source.points(), e.target.points(), e.map)}};
}

IsometricEmbedding embedding_from_json(const Json& j) {
  auto source = space_from_json(field(j, "source"));
  auto target = space_from_json(field(j, "target"));
  auto map = map_from_json(field(j, "map"), source.points(), target.points());
  return IsometricEmbedding(std::move(source), std::move(target), std::move(map));
}

Json map_to_json(const std::vector<std::string>& source, const std::vector<std::string>& target,
                 const std::vector<std::size_t>& map) {
  Json out = Json::object();
  for (std::size_t i = 0; i < source.size(); ++i) out[source[i]] = target[map[i]];
  return out;
}

std::vector<std::size_t> map_from_json(const Json& j, const std::vector<std::string>& source,
                                       const std::vector<std::string>& target) {
  if (!j.is_object()) fail_parse("a map must be an object {source label: target label}");
  std::unordered_map<std::string, std::size_t> target_index;
  for (std::size_t i = 0; i < target.size(); ++i) target_index.emplace(target[i], i);
  if (j.size() != source.size()) {
    fail_parse("map has " + std::to_string(j.size()) + " entries for " + std::to_string(source.size()) + " points");
  }
  std::vector<std::size_t> out(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const auto it = j.find(source[i]);
    if (it == j.end()) fail_parse("map has no entry for '" + source[i] + "'");
    if (!it->is_string()) fail_parse("map value for '" + source[i] + "' is not a label");
    const auto t = target_index.find(it->get<std::string>());
    if (t == target_index.end()) fail_parse("map sends '" + source[i] + "' to unknown '" + it->get<std::string>() + "'");
    out[i] = t->second;
  }
  return out;
}

Json certificate_json(const AlgebraAmalgam& a) {
  Json parts = Json::array();
  for (const auto& p : a.parts) parts.push_back(to_json(p));
  Json factors = Json::object();
  for (std::size_t r = 0; r < a.result.size(); ++r) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < a.parts.size(); ++i) arr.push_back(a.parts[i].super.label(a.factors[r][i]));
    factors[a.result.label(r)] = std::move(arr);
  }
  Json embeddings = Json::array();
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    std::vector<std::vector<std::size_t>> sets;
    for (std::size_t b = 0; b < a.parts[i].super.size(); ++b) sets.push_back(a.embed(i, b));
    embeddings.push_back(labelled_sets(a.parts[i].super.atoms(), a.result.atoms(), sets));
  }
  return Json{{"kind", "algebra-amalgam"}, {"base", to_json(a.base)},       {"parts", std::move(parts)},
              {"result", to_json(a.result)}, {"factors", std::move(factors)}, {"embeddings", std::move(embeddings)}};
}

Json certificate_json(const MetricAmalgam& a) {
  Json parts = Json::array();
  Json embeddings = Json::array();
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    parts.push_back(to_json(a.parts[i]));
    embeddings.push_back(map_to_json(a.parts[i].target.points(), a.result.points(), a.embeddings[i]));
  }
  return Json{{"kind", "metric-amalgam"},
              {"base", to_json(a.base)},
              {"parts", std::move(parts)},
              {"result", to_json(a.result)},
              {"base_map", map_to_json(a.base.points(), a.result.points(), a.base_map)},
              {"embeddings", std::move(embeddings)}};
}

Json certificate_json(const AlgebraRootCertificate& c) {
  const auto& amalgam = c.ambient;
  Json factors = Json::object();
  for (std::size_t r = 0; r < amalgam.result.size(); ++r) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < c.n; ++i) arr.push_back(amalgam.parts[i].super.label(amalgam.factors[r][i]));
    factors[amalgam.result.label(r)] = std::move(arr);
  }
  const auto& atoms = amalgam.result.atoms();
  return Json{{"kind", "algebra-root"},
              {"n", c.n},
              {"base", to_json(c.base)},
              {"g", map_to_json(c.g.algebra.atoms(), c.g.algebra.atoms(), c.g.perm.image())},
              {"f", map_to_json(c.f.algebra.atoms(), c.f.algebra.atoms(), c.f.perm.image())},
              {"ambient", Json{{"result", to_json(amalgam.result)}, {"factors", std::move(factors)}}},
              {"h", map_to_json(atoms, atoms, c.h.perm.image())},
              {"psi", c.psi}};
}

Json certificate_json(const MetricRootCertificate& c) {
  const auto& A = c.base_inclusion.source.points();
  const auto& B = c.base_inclusion.target.points();
  const auto& X = c.ambient.points();
  Json iota = Json::array();
  for (const auto& e : c.copies) iota.push_back(map_to_json(A, B, e.map));
  Json pi = Json::array();
  for (const auto& p : c.pi) pi.push_back(map_to_json(B, X, p));
  return Json{{"kind", "metric-root"},
              {"n", c.n},
              {"base_inclusion", to_json(c.base_inclusion)},
              {"f", map_to_json(A, A, c.f.perm.image())},
              {"g", map_to_json(B, B, c.g.perm.image())},
              {"ambient", to_json(c.ambient)},
              {"iota", std::move(iota)},
              {"pi", std::move(pi)},
              {"base_in_ambient", map_to_json(A, X, c.base_in_ambient)},
              {"h", map_to_json(X, X, c.h.perm.image())}};
}

Json certificate_json(const AlgebraPairTower& t) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    const auto& s = t.stages[i];
    const auto& atoms = s.algebra().atoms();
    std::optional<std::vector<std::size_t>> block_map;
    if (s.from_previous) block_map = s.from_previous->block_map;
    stages.push_back(Json{{"algebra", to_json(s.algebra())},
                          {"g", map_to_json(atoms, atoms, s.g.perm.image())},
                          {"f", map_to_json(atoms, atoms, s.f.perm.image())},
                          {"block_map", optional_map(block_map, atoms, i ? t.stages[i - 1].algebra().atoms() : atoms)}});
  }
  return Json{{"kind", "algebra-pair-tower"}, {"n", t.n}, {"seed", t.seed}, {"dyadic", t.dyadic}, {"stages", std::move(stages)}};
}

Json certificate_json(const MetricPairTower& t) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    const auto& s = t.stages[i];
    const auto& pts = s.space().points();
    std::optional<std::vector<std::size_t>> map;
    if (s.from_previous) map = s.from_previous->map;
    stages.push_back(Json{{"space", to_json(s.space())},
                          {"g", map_to_json(pts, pts, s.g.perm.image())},
                          {"f", map_to_json(pts, pts, s.f.perm.image())},
                          {"embedding", optional_map(map, i ? t.stages[i - 1].space().points() : pts, pts)}});
  }
  return Json{{"kind", "metric-pair-tower"}, {"n", t.n}, {"seed", t.seed}, {"root_every", t.root_every},
              {"stages", std::move(stages)}};
}

Json certificate_json(const AlgebraRootTower& t) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    const auto& s = t.stages[i];
    const auto& atoms = s.algebra().atoms();
    std::optional<std::vector<std::size_t>> block_map;
    if (s.from_previous) block_map = s.from_previous->block_map;
    stages.push_back(Json{{"algebra", to_json(s.algebra())},
                          {"generator", map_to_json(atoms, atoms, s.generator.perm.image())},
                          {"block_map", optional_map(block_map, atoms, i ? t.stages[i - 1].algebra().atoms() : atoms)}});
  }
  return Json{{"kind", "algebra-root-tower"}, {"seed", t.seed}, {"stages", std::move(stages)}};
}

Json certificate_json(const MetricRootTower& t) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    const auto& s = t.stages[i];
    const auto& pts = s.space().points();
    std::optional<std::vector<std::size_t>> map;
    if (s.from_previous) map = s.from_previous->map;
    stages.push_back(Json{{"space", to_json(s.space())},
                          {"generator", map_to_json(pts, pts, s.generator.perm.image())},
                          {"embedding", optional_map(map, i ? t.stages[i - 1].space().points() : pts, pts)}});
  }
  return Json{{"kind", "metric-root-tower"}, {"seed", t.seed}, {"stages", std::move(stages)}};
}

namespace {

Json carried_json(const CarriedMap& f) {
  Json domain = Json::array();
  Json image = Json::object();
  for (std::size_t a = 0; a < f.size(); ++a) {
    domain.push_back(f.label(a));
    image[f.label(a)] = f.carrier.label(f.image[a]);
  }
  return Json{{"carrier", to_json(f.carrier)}, {"domain", std::move(domain)}, {"f", std::move(image)}};
}

}  // namespace

Json certificate_json(const SuspensionSpace& s) {
  Json out = carried_json(s.context.map);
  out["kind"] = "suspension";
  out["s"] = s.context.s;
  out["space"] = to_json(s.space);
  out["shift"] = map_to_json(s.space.points(), s.space.points(), s.shift.perm.image());
  return out;
}

Json certificate_json(const RohlinResult& r, const FiniteMetricSpace& input_space, const std::vector<std::size_t>& domain,
                      const std::vector<std::size_t>& h, const PeriodSet& periods) {
  Json dom = Json::array();
  Json h_map = Json::object();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    dom.push_back(input_space.label(domain[i]));
    h_map[input_space.label(domain[i])] = input_space.label(h[i]);
  }
  const auto& sep = r.separated;
  Json f = Json::object();
  Json identification = Json::object();
  const auto& D = r.suspension.space;
  for (std::size_t a = 0; a < sep.size(); ++a) {
    f[sep.label(a)] = sep.carrier.label(sep.image[a]);
    identification[sep.label(a)] = D.label(r.domain_in_suspension[a]);
    identification[sep.carrier.label(sep.image[a])] = D.label(r.image_in_suspension[a]);
  }
  return Json{{"kind", "rohlin"},
              {"space", to_json(input_space)},
              {"domain", std::move(dom)},
              {"h", std::move(h_map)},
              {"epsilon", to_json(r.epsilon)},
              {"delta", to_json(sep.delta)},
              {"periods", to_json(periods)},
              {"separated", to_json(sep.carrier)},
              {"f", std::move(f)},
              {"s", r.s},
              {"suspension", Json{{"space", to_json(D)}, {"shift", map_to_json(D.points(), D.points(), r.g().perm.image())}}},
              {"identification", std::move(identification)}};
}

Json qaction_certificate(const AlgebraRootTower& t, std::int64_t k, std::size_t stage) {
  const auto action = q_action_algebra(t, k, stage);
  const auto& atoms = action.algebra.atoms();
  return Json{{"kind", "qaction"}, {"side", "algebra"}, {"k", k}, {"stage", stage},
              {"tower", certificate_json(t)}, {"action", map_to_json(atoms, atoms, action.perm.image())}};
}

Json qaction_certificate(const MetricRootTower& t, std::int64_t k, std::size_t stage) {
  const auto action = q_action_isometry(t, k, stage);
  const auto& pts = action.space.points();
  return Json{{"kind", "qaction"}, {"side", "metric"}, {"k", k}, {"stage", stage},
              {"tower", certificate_json(t)}, {"action", map_to_json(pts, pts, action.perm.image())}};
}

AlgebraPairTower algebra_pair_tower_from_json(const Json& j) {
  AlgebraPairTower t;
  t.n = unsigned_from_json(field(j, "n"), "n");
  t.seed = unsigned_from_json(field(j, "seed"), "seed");
  const Json& dyadic = field(j, "dyadic");
  if (!dyadic.is_boolean()) fail_parse("dyadic must be a boolean");
  t.dyadic = dyadic.get<bool>();
  for (const auto& s : field(j, "stages")) {
    auto algebra = algebra_from_json(field(s, "algebra"));
    auto g = map_from_json(field(s, "g"), algebra.atoms(), algebra.atoms());
    auto f = map_from_json(field(s, "f"), algebra.atoms(), algebra.atoms());
    std::optional<SubalgebraInclusion> inc;
    const Json& bm = field(s, "block_map");
    if (!bm.is_null()) {
      if (t.stages.empty()) fail_parse("the first stage has no predecessor");
      const auto& prev = t.stages.back().algebra();
      inc = SubalgebraInclusion(prev, algebra, map_from_json(bm, algebra.atoms(), prev.atoms()));
    }
    t.stages.push_back({std::move(inc), AlgebraAutomorphism(algebra, Permutation(std::move(g))),
                        AlgebraAutomorphism(algebra, Permutation(std::move(f)))});
  }
  return t;
}

MetricPairTower metric_pair_tower_from_json(const Json& j) {
  MetricPairTower t;
  t.n = unsigned_from_json(field(j, "n"), "n");
  t.seed = unsigned_from_json(field(j, "seed"), "seed");
  t.root_every = unsigned_from_json(field(j, "root_every"), "root_every");
  for (const auto& s : field(j, "stages")) {
    auto space = space_from_json(field(s, "space"));
    auto g = map_from_json(field(s, "g"), space.points(), space.points());
    auto f = map_from_json(field(s, "f"), space.points(), space.points());
    std::optional<IsometricEmbedding> emb;
    const Json& m = field(s, "embedding");
    if (!m.is_null()) {
      if (t.stages.empty()) fail_parse("the first stage has no predecessor");
      const auto& prev = t.stages.back().space();
      emb = IsometricEmbedding(prev, space, map_from_json(m, prev.points(), space.points()));
    }
    t.stages.push_back({std::move(emb), Isometry(space, Permutation(std::move(g))), Isometry(space, Permutation(std::move(f)))});
  }
  return t;
}

AlgebraRootTower algebra_root_tower_from_json(const Json& j) {
  AlgebraRootTower t;
  t.seed = unsigned_from_json(field(j, "seed"), "seed");
  for (const auto& s : field(j, "stages")) {
    auto algebra = algebra_from_json(field(s, "algebra"));
    auto g = map_from_json(field(s, "generator"), algebra.atoms(), algebra.atoms());
    std::optional<SubalgebraInclusion> inc;
    const Json& bm = field(s, "block_map");
    if (!bm.is_null()) {
      if (t.stages.empty()) fail_parse("the first stage has no predecessor");
      const auto& prev = t.stages.back().algebra();
      inc = SubalgebraInclusion(prev, algebra, map_from_json(bm, algebra.atoms(), prev.atoms()));
    }
    t.stages.push_back({std::move(inc), AlgebraAutomorphism(algebra, Permutation(std::move(g)))});
  }
  if (t.stages.empty()) fail_parse("a root tower has at least one stage");
  return t;
}

MetricRootTower metric_root_tower_from_json(const Json& j) {
  MetricRootTower t;
  t.seed = unsigned_from_json(field(j, "seed"), "seed");
  for (const auto& s : field(j, "stages")) {
    auto space = space_from_json(field(s, "space"));
    auto g = map_from_json(field(s, "generator"), space.points(), space.points());
    std::optional<IsometricEmbedding> emb;
    const Json& m = field(s, "embedding");
    if (!m.is_null()) {
      if (t.stages.empty()) fail_parse("the first stage has no predecessor");
      const auto& prev = t.stages.back().space();
      emb = IsometricEmbedding(prev, space, map_from_json(m, prev.points(), space.points()));
    }
    t.stages.push_back({std::move(emb), Isometry(space, Permutation(std::move(g)))});
  }
  if (t.stages.empty()) fail_parse("a root tower has at least one stage");
  return t;
}

Json to_json(const PeriodSet& p) {
  if (p.is_progression()) return Json{{"start", p.start()}, {"step", p.step()}};
  return Json{{"list", p.values()}};
}

PeriodSet period_set_from_json(const Json& j) {
  if (j.is_object() && j.contains("list")) {
    std::vector<std::size_t> values;
    for (const auto& v : j["list"]) values.push_back(unsigned_from_json(v, "period"));
    try {
      return PeriodSet::list(std::move(values));
    } catch (const Error& e) {
      fail_parse(e.what());
    }
  }
  const auto start = unsigned_from_json(field(j, "start"), "start");
  const auto step = unsigned_from_json(field(j, "step"), "step");
  if (start == 0 || step == 0) fail_parse("progression start and step must be positive");
  return PeriodSet::progression(start, step);
}

std::string infer_kind(const Json& j) {
  if (!j.is_object()) fail_parse("expected a JSON object");
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail_parse("kind must be a string");
    return j["kind"].get<std::string>();
  }
  if (j.contains("atoms")) return "algebra";
  if (j.contains("sub") && j.contains("super")) return "inclusion";
  if (j.contains("algebra") && j.contains("map")) return "automorphism";
  if (j.contains("points") && j.contains("dist")) return "space";
  if (j.contains("space") && j.contains("map")) return "isometry";
  if (j.contains("source") && j.contains("target")) return "embedding";
  fail_parse("cannot tell what kind of structure this is");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail_parse(std::string("malformed JSON: ") + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

}  // namespace urysohn
