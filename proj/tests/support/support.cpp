#include "support.hpp"

#include <algorithm>
#include <functional>

#include "urysohn/algebra_roots.hpp"
#include "urysohn/error.hpp"
#include "urysohn/metric_roots.hpp"
#include "urysohn/serialize.hpp"

namespace urysohn::testing {

Permutation naive_power(const Permutation& p, std::int64_t k) {
  const Permutation step = k >= 0 ? p : p.inverse();
  std::vector<std::size_t> image(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) image[i] = i;
  for (std::int64_t t = 0; t < (k >= 0 ? k : -k); ++t) {
    for (auto& v : image) v = step(v);
  }
  return Permutation(image);
}

std::uint64_t naive_order(const Permutation& p) {
  Permutation q = p;
  std::uint64_t m = 1;
  while (!q.is_identity()) {
    q = compose(p, q);
    ++m;
  }
  return m;
}

DistanceMatrix enumerate_simple_paths(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::optional<Rational>>> w(n, std::vector<std::optional<Rational>>(n));
  for (const auto& e : g.edges) {
    for (const auto& [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      if (!w[u][v] || e.weight < *w[u][v]) w[u][v] = e.weight;
    }
  }
  DistanceMatrix out(n, std::vector<std::optional<Rational>>(n));
  std::vector<bool> on_path(n, false);
  for (std::size_t src = 0; src < n; ++src) {
    std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t u, const Rational& len) {
      if (!out[src][u] || len < *out[src][u]) out[src][u] = len;
      on_path[u] = true;
      for (std::size_t v = 0; v < n; ++v) {
        if (w[u][v] && !on_path[v]) walk(v, len + *w[u][v]);
      }
      on_path[u] = false;
    };
    walk(src, Rational(0));
  }
  return out;
}

std::vector<std::vector<std::size_t>> compatible_tuples(const std::vector<SubalgebraInclusion>& parts) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tuple;
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == parts.size()) {
      out.push_back(tuple);
      return;
    }
    for (std::size_t b = 0; b < parts[i].super.size(); ++b) {
      if (i > 0 && parts[i].block_map[b] != parts[0].block_map[tuple[0]]) continue;
      tuple.push_back(b);
      extend(i + 1);
      tuple.pop_back();
    }
  };
  extend(0);
  return out;
}

bool is_metric(const FiniteMetricSpace& s) {
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (s.d(x, y) != s.d(y, x)) return false;
      if ((x == y) != s.d(x, y).is_zero() || s.d(x, y).sign() < 0) return false;
      for (std::size_t z = 0; z < n; ++z) {
        if (s.d(x, z) > s.d(x, y) + s.d(y, z)) return false;
      }
    }
  }
  return true;
}

bool preserves_distances(const FiniteMetricSpace& src, const FiniteMetricSpace& dst, const std::vector<std::size_t>& map) {
  for (std::size_t x = 0; x < src.size(); ++x) {
    for (std::size_t y = 0; y < src.size(); ++y) {
      if (dst.d(map[x], map[y]) != src.d(x, y)) return false;
    }
  }
  return true;
}

namespace {

SubalgebraInclusion inclusion_over(Rng& rng, const EquidistributedAlgebra& sub, std::size_t block, const std::string& prefix) {
  std::vector<std::size_t> block_map;
  for (std::size_t i = 0; i < sub.size() * block; ++i) block_map.push_back(i % sub.size());
  rng.shuffle(block_map);
  return SubalgebraInclusion(sub, labelled_algebra(sub.size() * block, prefix), std::move(block_map));
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

DyadicInstance random_dyadic_instance(Rng& rng, std::size_t n, std::size_t m, std::size_t max_k) {
  DyadicInstance out;
  out.m = m;
  out.base = labelled_algebra(std::size_t{1} << m, "a");
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(m), static_cast<std::int64_t>(max_k)));
    out.k.push_back(k);
    out.parts.push_back(inclusion_over(rng, out.base, std::size_t{1} << (k - m), "b" + std::to_string(i) + "_"));
  }
  return out;
}

SubalgebraInclusion random_inclusion(Rng& rng, std::size_t sub_atoms, std::size_t block) {
  return inclusion_over(rng, labelled_algebra(sub_atoms, "a"), block, "b");
}

AlgebraRootInstance random_algebra_root_instance(Rng& rng, std::size_t max_a, std::size_t max_b, std::size_t max_n,
                                                 std::size_t max_ambient) {
  for (;;) {
    const auto a = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_a)));
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_b / a)));
    const auto n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_n)));
    if (a * ipow(k, n) > max_ambient) continue;
    AlgebraRootInstance out;
    out.n = n;
    out.base = random_inclusion(rng, a, k);
    out.g = AlgebraAutomorphism(out.base.sub, random_permutation(a, rng));
    out.f = random_extension(out.base, power(out.g, static_cast<std::int64_t>(n)), rng);
    return out;
  }
}

MetricAmalgamInstance random_metric_amalgam_instance(Rng& rng, std::size_t max_base, std::size_t max_parts,
                                                     std::size_t max_part) {
  MetricAmalgamInstance out;
  const auto base_size = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_base)));
  out.base = random_metric_space(base_size, rng, kDefaultDenominatorCap, "z");
  const auto parts = rng.between(1, static_cast<std::int64_t>(max_parts));
  for (std::int64_t i = 0; i < parts; ++i) {
    const auto size = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(base_size), static_cast<std::int64_t>(std::max(base_size, max_part))));
    FiniteMetricSpace part = out.base;
    for (std::size_t c = base_size; c < size; ++c) {
      part = one_point_extension(part, "c" + std::to_string(c), random_katetov(part, rng));
    }
    out.parts.push_back(IsometricEmbedding::by_label(out.base, std::move(part)));
  }
  return out;
}

MetricRootInstance random_metric_root_instance(Rng& rng, std::size_t max_a, std::size_t max_b, std::size_t max_n) {
  MetricRootInstance out;
  out.f = random_isometry(max_a, rng);
  out.n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_n)));
  Isometry g = power(out.f, static_cast<std::int64_t>(out.n));
  for (std::size_t attempt = 0; attempt < 6 && g.space.size() < max_b; ++attempt) {
    auto grown = orbit_closure_extension(g, "u" + std::to_string(attempt), random_katetov(g.space, rng));
    if (grown.extended.space.size() <= max_b) g = std::move(grown.extended);
  }
  out.base = IsometricEmbedding::by_label(out.f.space, g.space);
  out.g = std::move(g);
  return out;
}

std::size_t least_period(const CarriedMap& f) {
  const Rational ratio = spread(f) / separation(f);
  mpz_class lift;
  mpz_cdiv_q(lift.get_mpz_t(), ratio.numerator().get_mpz_t(), ratio.denominator().get_mpz_t());
  return std::max<std::size_t>(3, 2 + lift.get_ui());
}

SuspensionInstance random_suspension_instance(Rng& rng, std::size_t max_a, std::size_t max_s) {
  const Isometry k = random_isometry(max_a, rng);
  std::vector<std::size_t> domain(k.space.size());
  for (std::size_t i = 0; i < domain.size(); ++i) domain[i] = i;
  rng.shuffle(domain);
  domain.resize(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(domain.size()))));
  std::sort(domain.begin(), domain.end());
  std::vector<std::size_t> h;
  for (const auto a : domain) h.push_back(k.perm(a));

  const Rational diam = k.space.diameter();
  const Rational delta = diam.is_zero() ? Rational(rng.between(1, 8), rng.between(1, 4))
                                        : diam / Rational(rng.between(1, static_cast<std::int64_t>(max_s) - 3));
  SuspensionInstance out;
  out.map = delta_separate(k.space, domain, h, delta);
  const std::size_t lower = least_period(out.map);
  if (lower > max_s) fail_internal("suspension instance needs a period above the cap");
  out.s = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lower), static_cast<std::int64_t>(max_s)));
  return out;
}

Path random_path(Rng& rng, const SuspensionContext& ctx, std::size_t length) {
  Path p;
  PathPoint at{rng.below(ctx.map.size()), rng.below(ctx.s)};
  p.push_back(at);
  while (p.size() < length) {
    const auto move = rng.below(3);
    at.x = move == 0 ? ctx.pred(at.x) : (move == 1 ? at.x : ctx.succ(at.x));
    at.a = rng.below(ctx.map.size());
    p.push_back(at);
  }
  return p;
}

namespace {

struct Site {
  nlohmann::json::json_pointer where;
  bool distance = false;
};

bool is_label_map(const nlohmann::json& j) {
  if (!j.is_object() || j.size() < 2) return false;
  std::string first;
  bool differs = false;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) return false;
    if (first.empty()) first = value.get<std::string>();
    differs = differs || value.get<std::string>() != first;
  }
  return differs;
}

void collect(const nlohmann::json& j, const nlohmann::json::json_pointer& at, std::vector<Site>& sites) {
  if (j.is_object()) {
    if (is_label_map(j)) {
      for (const auto& [key, value] : j.items()) sites.push_back({at / key, false});
      return;
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "dist" && value.is_array()) {
        for (std::size_t r = 0; r < value.size(); ++r) {
          for (std::size_t c = 0; c < value[r].size(); ++c) sites.push_back({at / key / r / c, true});
        }
      } else {
        collect(value, at / key, sites);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect(j[i], at / i, sites);
  }
}

}  // namespace

std::optional<std::string> mutate(nlohmann::json& blob, Rng& rng) {
  std::vector<Site> sites;
  collect(blob, nlohmann::json::json_pointer(), sites);
  if (sites.empty()) return std::nullopt;
  const Site& site = sites[rng.below(sites.size())];
  auto& entry = blob[site.where];
  if (site.distance) {
    const Rational old = Rational::parse(entry.get<std::string>());
    entry = (old + Rational(1, 1000000)).str();
    return site.where.to_string() + " += 1/1000000";
  }
  const auto& map = blob[site.where.parent_pointer()];
  std::vector<std::string> others;
  for (const auto& [key, value] : map.items()) {
    if (value.get<std::string>() != entry.get<std::string>()) others.push_back(value.get<std::string>());
  }
  const std::string old = entry.get<std::string>();
  entry = others[rng.below(others.size())];
  return site.where.to_string() + ": " + old + " -> " + entry.get<std::string>();
}

/// One certificate of every kind, built from `seed`.
std::vector<nlohmann::json> mixed_certificates(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<nlohmann::json> out;
  const auto dy = testing::random_dyadic_instance(rng, 3, 1, 3);
  out.push_back(certificate_json(free_amalgam_algebra(dy.base, dy.parts)));
  const auto ma = testing::random_metric_amalgam_instance(rng, 3, 3, 5);
  out.push_back(certificate_json(free_amalgam_metric(ma.base, ma.parts)));
  const auto ar = testing::random_algebra_root_instance(rng, 4, 12, 3, 512);
  out.push_back(certificate_json(nth_root_extension_algebra(ar.base, ar.g, ar.f, ar.n)));
  const auto mr = testing::random_metric_root_instance(rng, 4, 7, 3);
  out.push_back(certificate_json(nth_root_extension_isometry(mr.base, mr.f, mr.g, mr.n)));
  out.push_back(certificate_json(build_pair_tower_algebra(2, 2, seed)));
  out.push_back(certificate_json(build_pair_tower_isometry(2, 2, seed)));
  const auto art = build_root_tower_algebra(3, seed);
  out.push_back(certificate_json(art));
  out.push_back(qaction_certificate(art, static_cast<std::int64_t>(seed % 7) - 3, 3));
  const auto mrt = build_root_tower_isometry(3, seed);
  out.push_back(certificate_json(mrt));
  out.push_back(qaction_certificate(mrt, static_cast<std::int64_t>(seed % 5) + 1, 2));
  const auto su = testing::random_suspension_instance(rng, 3, 8);
  out.push_back(certificate_json(circular_suspension(su.map, su.s)));
  const auto k = random_isometry(4, rng);
  std::vector<std::size_t> domain, h;
  for (std::size_t x = 0; x < k.space.size(); ++x) {
    domain.push_back(x);
    h.push_back(k.perm(x));
  }
  const auto periods = PeriodSet::multiples_of(2);
  const auto r = rohlin_approximation(k.space, domain, h, Rational(2), periods);
  out.push_back(certificate_json(r, k.space, domain, h, periods));
  out.push_back(to_json(k));
  out.push_back(to_json(mr.base));
  out.push_back(to_json(ar.base));
  out.push_back(to_json(ar.f));
  return out;
}

}  // namespace urysohn::testing
