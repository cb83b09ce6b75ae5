#include "urysohn/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "urysohn/error.hpp"
#include "urysohn/random.hpp"
#include "urysohn/serialize.hpp"
#include "urysohn/verify.hpp"

namespace urysohn::cli {

namespace fs = std::filesystem;

namespace {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure("cannot open " + path + " for writing");
  file << text;
  if (!file.flush()) throw IoFailure("cannot write " + path);
}

std::string certificate_path(const std::string& out, const std::string& cert) {
  if (!cert.empty()) return cert;
  const fs::path p(out);
  return (p.parent_path() / (p.stem().string() + ".cert.json")).string();
}

struct Emit {
  std::string out;
  std::string cert;
};

void emit(const Emit& where, const Json& result, const Json& certificate, std::ostream& out) {
  const std::string cert = certificate_path(where.out, where.cert);
  write_file(where.out, dump(result));
  write_file(cert, dump(certificate));
  out << "result: " << where.out << "\ncertificate: " << cert << "\n";
}

/// A map given either bare ({label: label}) or inside an automorphism or
/// isometry object.
const Json& map_part(const Json& j) { return j.is_object() && j.contains("map") ? j.at("map") : j; }

AlgebraAutomorphism load_automorphism(const std::string& path, const EquidistributedAlgebra& algebra) {
  const Json j = load_json_file(path);
  if (j.is_object() && j.contains("algebra") && algebra_from_json(j.at("algebra")) != algebra) {
    fail_precondition(path + " is an automorphism of a different algebra");
  }
  return AlgebraAutomorphism(algebra, Permutation(map_from_json(map_part(j), algebra.atoms(), algebra.atoms())));
}

Isometry load_isometry(const std::string& path, const FiniteMetricSpace& space) {
  const Json j = load_json_file(path);
  if (j.is_object() && j.contains("space") && !(space_from_json(j.at("space")) == space)) {
    fail_precondition(path + " is an isometry of a different space");
  }
  return Isometry(space, Permutation(map_from_json(map_part(j), space.points(), space.points())));
}

Json automorphism_result(const AlgebraAutomorphism& g) { return to_json(g); }
Json isometry_result(const Isometry& g) { return to_json(g); }

// --- subcommands -----------------------------------------------------------

struct AmalgamAlgebraArgs {
  std::string base;
  std::vector<std::string> parts;
  Emit where;
};

int amalgam_algebra(const AmalgamAlgebraArgs& a, std::ostream& out) {
  std::vector<SubalgebraInclusion> parts;
  for (const auto& p : a.parts) parts.push_back(inclusion_from_json(load_json_file(p)));
  const EquidistributedAlgebra base = a.base.empty() ? parts.front().sub : algebra_from_json(load_json_file(a.base));
  const auto amalgam = free_amalgam_algebra(base, parts);
  emit(a.where, to_json(amalgam.result), certificate_json(amalgam), out);
  return kExitOk;
}

struct AmalgamMetricArgs {
  std::string base;
  std::vector<std::string> parts;
  Emit where;
};

int amalgam_metric(const AmalgamMetricArgs& a, std::ostream& out) {
  std::vector<IsometricEmbedding> parts;
  for (const auto& p : a.parts) parts.push_back(embedding_from_json(load_json_file(p)));
  const FiniteMetricSpace base = a.base.empty() ? parts.front().source : space_from_json(load_json_file(a.base));
  const auto amalgam = free_amalgam_metric(base, parts);
  emit(a.where, to_json(amalgam.result), certificate_json(amalgam), out);
  return kExitOk;
}

struct RootArgs {
  std::string base;
  std::string space;
  std::string f;
  std::string g;
  std::size_t n = 2;
  Emit where;
};

int root_algebra(const RootArgs& a, std::ostream& out) {
  const auto inclusion = inclusion_from_json(load_json_file(a.base));
  const auto g = load_automorphism(a.g, inclusion.sub);
  const auto f = load_automorphism(a.f, inclusion.super);
  const auto cert = nth_root_extension_algebra(inclusion, g, f, a.n);
  emit(a.where, automorphism_result(cert.h), certificate_json(cert), out);
  return kExitOk;
}

int root_metric(const RootArgs& a, std::ostream& out) {
  const Json base = load_json_file(a.base);
  IsometricEmbedding inclusion;
  if (infer_kind(base) == "embedding") {
    inclusion = embedding_from_json(base);
  } else {
    if (a.space.empty()) fail_precondition("--space is required when --base is a plain space");
    inclusion = IsometricEmbedding::by_label(space_from_json(base), space_from_json(load_json_file(a.space)));
  }
  const auto f = load_isometry(a.f, inclusion.source);
  const auto g = load_isometry(a.g, inclusion.target);
  const auto cert = nth_root_extension_isometry(inclusion, f, g, a.n);
  emit(a.where, isometry_result(cert.h), certificate_json(cert), out);
  return kExitOk;
}

struct TowerArgs {
  std::size_t n = 2;
  std::size_t steps = 3;
  std::size_t depth = 0;
  std::size_t root_every = 1;
  bool dyadic = false;
  std::uint64_t seed = 0;
  Emit where;
};

int tower_algebra(const TowerArgs& a, std::ostream& out) {
  if (a.depth > 0) {
    const auto t = build_root_tower_algebra(a.depth, a.seed);
    emit(a.where, automorphism_result(t.stages.back().generator), certificate_json(t), out);
  } else {
    const auto t = build_pair_tower_algebra(a.n, a.steps, a.seed, a.dyadic);
    emit(a.where, automorphism_result(t.stages.back().g), certificate_json(t), out);
  }
  return kExitOk;
}

int tower_metric(const TowerArgs& a, std::ostream& out) {
  if (a.depth > 0) {
    const auto t = build_root_tower_isometry(a.depth, a.seed);
    emit(a.where, isometry_result(t.stages.back().generator), certificate_json(t), out);
  } else {
    const auto t = build_pair_tower_isometry(a.n, a.steps, a.seed, a.root_every);
    emit(a.where, isometry_result(t.stages.back().g), certificate_json(t), out);
  }
  return kExitOk;
}

struct QActionArgs {
  std::string tower;
  std::int64_t k = 1;
  std::size_t stage = 1;
  Emit where;
};

int qaction(const QActionArgs& a, std::ostream& out) {
  const Json t = load_json_file(a.tower);
  const std::string kind = infer_kind(t);
  if (kind == "algebra-root-tower") {
    const auto tower = algebra_root_tower_from_json(t);
    emit(a.where, automorphism_result(q_action_algebra(tower, a.k, a.stage)), qaction_certificate(tower, a.k, a.stage), out);
  } else if (kind == "metric-root-tower") {
    const auto tower = metric_root_tower_from_json(t);
    emit(a.where, isometry_result(q_action_isometry(tower, a.k, a.stage)), qaction_certificate(tower, a.k, a.stage), out);
  } else {
    fail_parse(a.tower + " is a " + kind + ", not a root tower");
  }
  return kExitOk;
}

struct RohlinArgs {
  std::string space;
  std::string map;
  std::string epsilon;
  std::string periods;
  Emit where;
};

int rohlin(const RohlinArgs& a, std::ostream& out) {
  const auto space = space_from_json(load_json_file(a.space));
  const Json mj = map_part(load_json_file(a.map));
  if (!mj.is_object()) fail_parse("the map must be an object {point: image}");
  std::vector<std::string> keys;
  for (const auto& label : space.points()) {
    if (mj.contains(label)) keys.push_back(label);
  }
  if (keys.size() != mj.size()) fail_parse("the map names points outside the space");
  std::vector<std::size_t> domain;
  for (const auto& k : keys) domain.push_back(space.index_of(k));
  const auto h = map_from_json(mj, keys, space.points());
  const Rational epsilon = Rational::parse(a.epsilon);
  const PeriodSet periods = PeriodSet::parse(a.periods);
  const auto r = rohlin_approximation(space, domain, h, epsilon, periods);
  const Json cert = certificate_json(r, space, domain, h, periods);
  emit(a.where, isometry_result(r.g()), cert, out);
  out << "s = " << r.s << "\n" << verify_certificate(cert).text();
  return kExitOk;
}

struct GenArgs {
  std::string kind = "metric";
  std::size_t points = 4;
  std::uint64_t seed = 0;
  std::string out;
};

Json generate(const GenArgs& a) {
  if (a.points == 0) fail_precondition("--points must be positive");
  Rng rng(a.seed);
  if (a.kind == "metric") return to_json(random_metric_space(a.points, rng));
  if (a.kind == "isometry") return to_json(random_isometry(a.points, rng));
  if (a.kind == "algebra") {
    auto labels = labelled_algebra(a.points).atoms();
    rng.shuffle(labels);
    return to_json(EquidistributedAlgebra(std::move(labels)));
  }
  if (a.kind == "automorphism") {
    return to_json(AlgebraAutomorphism(labelled_algebra(a.points), random_permutation(a.points, rng)));
  }
  if (a.kind == "inclusion") {
    std::vector<std::size_t> divisors;
    for (std::size_t d = 1; d <= a.points; ++d) {
      if (a.points % d == 0) divisors.push_back(d);
    }
    const std::size_t sub_size = divisors[rng.below(divisors.size())];
    std::vector<std::size_t> block_map;
    for (std::size_t i = 0; i < a.points; ++i) block_map.push_back(i % sub_size);
    rng.shuffle(block_map);
    return to_json(SubalgebraInclusion(labelled_algebra(sub_size, "a"), labelled_algebra(a.points), std::move(block_map)));
  }
  if (a.kind == "embedding") {
    auto target = random_metric_space(a.points, rng);
    std::vector<std::size_t> order(a.points);
    for (std::size_t i = 0; i < a.points; ++i) order[i] = i;
    rng.shuffle(order);
    order.resize(1 + rng.below(a.points));
    std::sort(order.begin(), order.end());
    auto source = target.restrict_to(order);
    return to_json(IsometricEmbedding(std::move(source), std::move(target), order));
  }
  fail_precondition("unknown --kind '" + a.kind + "'");
}

int gen(const GenArgs& a, std::ostream& out) {
  const std::string text = dump(generate(a));
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string cert;
  std::string format = "text";
};

int verify(const VerifyArgs& a, std::ostream& out) {
  const auto report = verify_certificate(load_json_file(a.cert));
  if (a.format == "json") {
    out << dump(report.to_json());
  } else {
    out << report.text();
  }
  return report.passed() ? kExitOk : kExitDomain;
}

void add_emit(CLI::App* sub, Emit& where) {
  sub->add_option("--out", where.out, "Result file")->required();
  sub->add_option("--cert", where.cert, "Certificate file (default: <out stem>.cert.json)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact constructions on measured algebras and rational metric spaces"};
  app.name("urysohn-forge");
  app.require_subcommand(1);

  AmalgamAlgebraArgs aa;
  auto* c_aa = app.add_subcommand("amalgam-algebra", "Free amalgam of algebra inclusions over a common subalgebra");
  c_aa->add_option("--base", aa.base, "Common subalgebra (default: sub of the first part)");
  c_aa->add_option("--parts", aa.parts, "Inclusion files")->required()->expected(1, -1);
  add_emit(c_aa, aa.where);

  AmalgamMetricArgs am;
  auto* c_am = app.add_subcommand("amalgam-metric", "Free amalgam of metric spaces over a common subspace");
  c_am->add_option("--base", am.base, "Common subspace (default: source of the first part)");
  c_am->add_option("--parts", am.parts, "Embedding files")->required()->expected(1, -1);
  add_emit(c_am, am.where);

  RootArgs ra;
  auto* c_ra = app.add_subcommand("root-algebra", "n-th root extension of an algebra automorphism");
  c_ra->add_option("--base", ra.base, "Inclusion A in B")->required();
  c_ra->add_option("--g", ra.g, "Automorphism g of A")->required();
  c_ra->add_option("--f", ra.f, "Automorphism f of B with f|A = g^n")->required();
  c_ra->add_option("--n", ra.n, "Root order")->required()->check(CLI::PositiveNumber);
  add_emit(c_ra, ra.where);

  RootArgs rm;
  auto* c_rm = app.add_subcommand("root-metric", "n-th root extension of an isometry");
  c_rm->add_option("--base", rm.base, "Space A, or an embedding of A into B")->required();
  c_rm->add_option("--space", rm.space, "Space B containing A by label");
  c_rm->add_option("--f", rm.f, "Isometry f of A")->required();
  c_rm->add_option("--g", rm.g, "Isometry g of B with g|A = f^n")->required();
  c_rm->add_option("--n", rm.n, "Root order")->required()->check(CLI::PositiveNumber);
  add_emit(c_rm, rm.where);

  TowerArgs ta;
  auto* c_ta = app.add_subcommand("tower-algebra", "Pair tower (--n, --steps) or root tower (--depth) of automorphisms");
  auto* ta_n = c_ta->add_option("--n", ta.n, "Power relating f to g")->check(CLI::PositiveNumber);
  auto* ta_steps = c_ta->add_option("--steps", ta.steps, "Extension steps");
  auto* ta_dyadic = c_ta->add_flag("--dyadic", ta.dyadic, "Split every atom in two");
  c_ta->add_option("--depth", ta.depth, "Root tower depth")->check(CLI::PositiveNumber)->excludes(ta_n, ta_steps, ta_dyadic);
  c_ta->add_option("--seed", ta.seed, "Random seed");
  add_emit(c_ta, ta.where);

  TowerArgs tm;
  auto* c_tm = app.add_subcommand("tower-metric", "Pair tower (--n, --steps) or root tower (--depth) of isometries");
  auto* tm_n = c_tm->add_option("--n", tm.n, "Power relating f to g")->check(CLI::PositiveNumber);
  auto* tm_steps = c_tm->add_option("--steps", tm.steps, "Extension steps");
  auto* tm_every = c_tm->add_option("--root-every", tm.root_every, "Take a root every this many steps")->check(CLI::PositiveNumber);
  c_tm->add_option("--depth", tm.depth, "Root tower depth")->check(CLI::PositiveNumber)->excludes(tm_n, tm_steps, tm_every);
  c_tm->add_option("--seed", tm.seed, "Random seed");
  add_emit(c_tm, tm.where);

  QActionArgs qa;
  auto* c_qa = app.add_subcommand("qaction", "Action of k/m! through a root tower");
  c_qa->add_option("--tower", qa.tower, "Root tower certificate")->required();
  c_qa->add_option("--k", qa.k, "Numerator k")->required();
  c_qa->add_option("--stage", qa.stage, "Stage m (1-based)")->required();
  add_emit(c_qa, qa.where);

  RohlinArgs ro;
  auto* c_ro = app.add_subcommand("rohlin", "Periodic approximation of a partial isometry");
  c_ro->add_option("--space", ro.space, "Metric space")->required();
  c_ro->add_option("--map", ro.map, "Point map {a: h(a)} on a subset of the space")->required();
  c_ro->add_option("--epsilon", ro.epsilon, "Tolerance p/q")->required();
  c_ro->add_option("--periods", ro.periods, "Admissible periods, e.g. \"2,4,6,...\"")->required();
  add_emit(c_ro, ro.where);

  GenArgs ga;
  auto* c_ga = app.add_subcommand("gen", "Seeded random structure");
  c_ga->add_option("--kind", ga.kind, "metric, isometry, algebra, automorphism, inclusion or embedding")
      ->check(CLI::IsMember({"metric", "isometry", "algebra", "automorphism", "inclusion", "embedding"}));
  c_ga->add_option("--points", ga.points, "Points or atoms")->check(CLI::PositiveNumber);
  c_ga->add_option("--seed", ga.seed, "Random seed");
  c_ga->add_option("--out", ga.out, "Output file (default: standard output)");

  VerifyArgs va;
  auto* c_va = app.add_subcommand("verify", "Replay every identity a certificate claims");
  c_va->add_option("--cert,cert", va.cert, "Certificate or structure file")->required();
  c_va->add_option("--format", va.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (c_aa->parsed()) return amalgam_algebra(aa, out);
    if (c_am->parsed()) return amalgam_metric(am, out);
    if (c_ra->parsed()) return root_algebra(ra, out);
    if (c_rm->parsed()) return root_metric(rm, out);
    if (c_ta->parsed()) return tower_algebra(ta, out);
    if (c_tm->parsed()) return tower_metric(tm, out);
    if (c_qa->parsed()) return qaction(qa, out);
    if (c_ro->parsed()) return rohlin(ro, out);
    if (c_ga->parsed()) return gen(ga, out);
    if (c_va->parsed()) return verify(va, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::parse ? kExitIo : kExitDomain;
  } catch (const IoFailure& e) {
    err << "error[io]: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "error[parse]: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return kExitDomain;
  }
  err << "error: no subcommand\n";
  return kExitIo;
}

}  // namespace urysohn::cli
