#include "urysohn/metric_roots.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "urysohn/error.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

IsometricEmbedding compose(const IsometricEmbedding& lower, const IsometricEmbedding& upper) {
  if (!(lower.target == upper.source)) fail_precondition("embeddings do not compose");
  std::vector<std::size_t> map(lower.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = upper.map[lower.map[x]];
  return IsometricEmbedding(lower.source, upper.target, std::move(map));
}

MetricRootCertificate nth_root_extension_isometry(const IsometricEmbedding& base, const Isometry& f, const Isometry& g,
                                                  std::size_t n) {
  if (n == 0) fail_precondition("root order must be positive");
  if (!(f.space == base.source)) fail_precondition("f is not an isometry of the subspace");
  if (!(g.space == base.target)) fail_precondition("g is not an isometry of the superspace");

  const FiniteMetricSpace& A = base.source;
  const FiniteMetricSpace& B = base.target;
  std::vector<bool> in_base(B.size(), false);
  for (const auto b : base.map) in_base[b] = true;
  const Permutation f_n = permutation_power(f.perm, static_cast<std::int64_t>(n));
  for (std::size_t a = 0; a < A.size(); ++a) {
    const std::size_t image = g.perm(base.map[a]);
    if (!in_base[image]) {
      fail_precondition("g moves '" + B.label(base.map[a]) + "' out of the subspace");
    }
    if (image != base.map[f_n(a)]) {
      fail_precondition("f^" + std::to_string(n) + " differs from g at '" + A.label(a) + "'");
    }
  }

  MetricRootCertificate cert;
  cert.base_inclusion = base;
  cert.f = f;
  cert.g = g;
  cert.n = n;
  for (std::size_t i = 1; i <= n; ++i) {
    const Permutation back = permutation_power(f.perm, -static_cast<std::int64_t>(i));
    std::vector<std::size_t> map(A.size());
    for (std::size_t a = 0; a < A.size(); ++a) map[a] = base.map[back(a)];
    cert.copies.emplace_back(A, B, std::move(map));
  }

  if (n == 1) {
    cert.ambient = B;
    cert.pi = {Permutation::identity(B.size()).image()};
    cert.base_in_ambient = cert.copies.front().map;
    cert.h = g;
    return cert;
  }

  if (A.empty()) fail_precondition("root extension over an empty subspace needs n = 1");
  auto amalgam = free_amalgam_metric(A, cert.copies);
  cert.ambient = std::move(amalgam.result);
  cert.pi = std::move(amalgam.embeddings);
  cert.base_in_ambient = std::move(amalgam.base_map);

  std::vector<std::size_t> image(cert.ambient.size());
  for (std::size_t a = 0; a < A.size(); ++a) image[cert.base_in_ambient[a]] = cert.base_in_ambient[f.perm(a)];
  for (std::size_t x = 0; x < B.size(); ++x) {
    if (in_base[x]) continue;
    for (std::size_t i = 0; i + 1 < n; ++i) image[cert.pi[i][x]] = cert.pi[i + 1][x];
    image[cert.pi[n - 1][x]] = cert.pi[0][g.perm(x)];
  }
  cert.h = Isometry(cert.ambient, Permutation(std::move(image)));
  return cert;
}

namespace {

/// Identity embedding of the first source.size() points of `target`.
IsometricEmbedding prefix_embedding(const FiniteMetricSpace& source, const FiniteMetricSpace& target) {
  std::vector<std::size_t> map(source.size());
  std::iota(map.begin(), map.end(), std::size_t{0});
  return IsometricEmbedding(source, target, std::move(map));
}

Isometry close_around_random_point(const Isometry& k, const std::string& label, Rng& rng) {
  if (k.space.empty()) {
    FiniteMetricSpace point({label}, {{Rational(0)}});
    return Isometry::identity(std::move(point));
  }
  return orbit_closure_extension(k, label, random_katetov(k.space, rng)).extended;
}

}  // namespace

MetricPairTower build_pair_tower_isometry(std::size_t n, std::size_t steps, std::uint64_t seed,
                                          std::size_t root_every) {
  if (n == 0) fail_precondition("root order must be positive");
  if (root_every == 0) fail_precondition("root cadence must be positive");
  Rng rng(seed);
  MetricPairTower tower;
  tower.n = n;
  tower.seed = seed;
  tower.root_every = root_every;
  tower.stages.push_back({std::nullopt, Isometry::identity(FiniteMetricSpace()), Isometry::identity(FiniteMetricSpace())});

  const auto exponent = static_cast<std::int64_t>(n);
  for (std::size_t step = 1; step <= steps; ++step) {
    const auto& current = tower.stages.back();
    Isometry k = close_around_random_point(current.g, "u" + std::to_string(step), rng);
    auto into_c = prefix_embedding(current.space(), k.space);
    if (step % root_every != 0) {
      auto f = power(k, exponent);
      tower.stages.push_back({std::move(into_c), std::move(k), std::move(f)});
      continue;
    }
    Isometry p = close_around_random_point(power(k, exponent), "v" + std::to_string(step), rng);
    auto cert = nth_root_extension_isometry(prefix_embedding(k.space, p.space), k, p, n);
    IsometricEmbedding into_e(cert.f.space, cert.ambient, cert.base_in_ambient);
    auto f = power(cert.h, exponent);
    tower.stages.push_back({compose(into_c, into_e), std::move(cert.h), std::move(f)});
  }
  return tower;
}

namespace {

std::size_t inverse_mod(std::uint64_t n, std::uint64_t m) {
  for (std::uint64_t e = 0; e < m; ++e) {
    if ((e * n) % m == 1 % m) return static_cast<std::size_t>(e);
  }
  fail_internal("no modular inverse");
}

/// Seeded g₁: m ≥ 2 points y@i at distance r from a fixed centre x0 and 2r
/// from each other, rotated cyclically, sometimes closed around one more
/// random point.
Isometry seed_generator(Rng& rng) {
  const std::size_t m = static_cast<std::size_t>(rng.between(2, 3));
  const Rational r = random_rational_in(Rational(0), std::nullopt, kDefaultDenominatorCap, rng);
  FiniteMetricSpace centre({"x0"}, {{Rational(0)}});
  FiniteMetricSpace spoke({"x0", "y"}, {{Rational(0), r}, {r, Rational(0)}});
  std::vector<IsometricEmbedding> parts(m, IsometricEmbedding(centre, spoke, {0}));
  auto star = free_amalgam_metric(centre, parts);
  std::vector<std::size_t> image(star.result.size());
  image[0] = 0;
  for (std::size_t i = 0; i < m; ++i) image[star.embeddings[i][1]] = star.embeddings[(i + 1) % m][1];
  Isometry g(std::move(star.result), Permutation(std::move(image)));
  if (rng.coin()) g = orbit_closure_extension(g, "w", random_katetov(g.space, rng)).extended;
  return g;
}

}  // namespace

MetricRootTower build_root_tower_isometry(std::size_t depth, std::uint64_t seed) {
  if (depth == 0) fail_precondition("a root tower needs at least one stage");
  Rng rng(seed);
  MetricRootTower tower;
  tower.seed = seed;
  tower.stages.push_back({std::nullopt, seed_generator(rng)});

  for (std::size_t n = 2; n <= depth; ++n) {
    const Isometry& g = tower.stages.back().generator;
    // A: the g-cycles whose length is coprime to n, where g has an n-th root.
    // When that is all of B, fall back to the fixed points so the tower grows.
    std::vector<std::size_t> subset;
    for (const auto& c : g.perm.cycles()) {
      if (std::gcd(c.size(), n) == 1) subset.insert(subset.end(), c.begin(), c.end());
    }
    if (subset.size() == g.space.size()) {
      subset.clear();
      for (std::size_t x = 0; x < g.space.size(); ++x) {
        if (g.perm(x) == x) subset.push_back(x);
      }
    }
    std::sort(subset.begin(), subset.end());
    std::vector<std::size_t> local(g.space.size());
    for (std::size_t i = 0; i < subset.size(); ++i) local[subset[i]] = i;
    std::vector<std::size_t> restricted(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) restricted[i] = local[g.perm(subset[i])];

    Isometry g_on_a(g.space.restrict_to(subset), Permutation(std::move(restricted)));
    const std::uint64_t order = permutation_order(g_on_a.perm);
    Isometry f = power(g_on_a, static_cast<std::int64_t>(inverse_mod(n, order)));
    auto cert = nth_root_extension_isometry(IsometricEmbedding(f.space, g.space, subset), f, g, n);
    tower.stages.push_back({cert.top_inclusion(), std::move(cert.h)});
  }
  return tower;
}

Isometry q_action_isometry(const MetricRootTower& tower, std::int64_t k, std::size_t m) {
  if (m == 0 || m > tower.stages.size()) {
    fail_precondition("stage " + std::to_string(m) + " outside the tower (1.." + std::to_string(tower.stages.size()) + ")");
  }
  return power(tower.stages[m - 1].generator, k);
}

IsometricEmbedding tower_embedding(const MetricRootTower& tower, std::size_t from, std::size_t to) {
  if (from == 0 || from > to || to > tower.stages.size()) fail_precondition("stage range outside the tower");
  const auto& start = tower.stages[from - 1].space();
  IsometricEmbedding acc = prefix_embedding(start, start);
  for (std::size_t s = from + 1; s <= to; ++s) acc = compose(acc, *tower.stages[s - 1].from_previous);
  return acc;
}

}  // namespace urysohn
