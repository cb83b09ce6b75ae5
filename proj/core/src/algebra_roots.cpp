#include "urysohn/algebra_roots.hpp"

#include <map>
#include <numeric>
#include <string>

#include "urysohn/error.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > kMaxTowerAtoms * 64 / std::max<std::size_t>(base, 1)) return kMaxTowerAtoms * 64;
    out *= base;
  }
  return out;
}

EquidistributedAlgebra relabel_copy(const EquidistributedAlgebra& b, std::size_t copy) {
  std::vector<std::string> labels;
  labels.reserve(b.size());
  for (const auto& l : b.atoms()) labels.push_back(l + "@" + std::to_string(copy));
  return EquidistributedAlgebra(std::move(labels));
}

}  // namespace

AlgebraRootCertificate nth_root_extension_algebra(const SubalgebraInclusion& base, const AlgebraAutomorphism& g,
                                                  const AlgebraAutomorphism& f, std::size_t n) {
  if (n == 0) fail_precondition("root order must be positive");
  if (!(g.algebra == base.sub)) fail_precondition("g is not an automorphism of the subalgebra");
  if (!(f.algebra == base.super)) fail_precondition("f is not an automorphism of the superalgebra");

  const auto blocks = base.blocks();
  const std::size_t m = base.sub.size();
  const std::size_t k = base.block_size();
  std::vector<std::size_t> pos(base.super.size());
  for (const auto& block : blocks) {
    for (std::size_t j = 0; j < block.size(); ++j) pos[block[j]] = j;
  }

  const Permutation phi_n = permutation_power(g.perm, static_cast<std::int64_t>(n));
  for (std::size_t b = 0; b < base.super.size(); ++b) {
    const std::size_t a = base.block_map[b];
    if (base.block_map[f.perm(b)] != phi_n(a)) {
      fail_precondition("f does not restrict to g^" + std::to_string(n) + ": atom '" + base.super.label(b) +
                        "' leaves the block of '" + base.sub.label(phi_n(a)) + "'");
    }
  }

  AlgebraRootCertificate cert;
  cert.base = base;
  cert.g = g;
  cert.f = f;
  cert.n = n;
  cert.psi.assign(m, std::vector<std::size_t>(k));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) cert.psi[i][j] = pos[f.perm(blocks[i][j])];
    if (!is_bijection(cert.psi[i])) fail_internal("psi(i, .) is not a bijection");
  }

  if (n == 1) {
    AlgebraAmalgam& amalgam = cert.ambient;
    amalgam.base = base.sub;
    amalgam.parts = {base};
    amalgam.result = base.super;
    amalgam.base_of = base.block_map;
    for (std::size_t b = 0; b < base.super.size(); ++b) amalgam.factors.push_back({b});
    cert.h = f;
    return cert;
  }

  if (ipow(k, n) > kMaxTowerAtoms / m) fail_precondition("root extension would exceed the atom limit");
  std::vector<SubalgebraInclusion> copies;
  for (std::size_t c = 1; c <= n; ++c) {
    copies.emplace_back(base.sub, relabel_copy(base.super, c), base.block_map);
  }
  cert.ambient = free_amalgam_algebra(base.sub, copies);
  const auto& amalgam = cert.ambient;

  // Result atoms are enumerated base atom first, then block positions with
  // the last factor varying fastest.
  const std::size_t stride = ipow(k, n);
  auto index_of = [&](std::size_t a, const std::vector<std::size_t>& p) {
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) idx = idx * k + p[t];
    return a * stride + idx;
  };

  std::vector<std::size_t> image(amalgam.result.size());
  std::vector<std::size_t> p(n), q(n);
  for (std::size_t r = 0; r < amalgam.result.size(); ++r) {
    const std::size_t a = amalgam.base_of[r];
    for (std::size_t t = 0; t < n; ++t) p[t] = pos[amalgam.factors[r][t]];
    const std::size_t a2 = g.perm(a);
    // h(bᵢ^{j₁}⊗…⊗bᵢ^{jₙ}) = b_{φ(i)}^{ψ(i,jₙ)}⊗b_{φ(i)}^{j₁}⊗…⊗b_{φ(i)}^{j_{n−1}}
    q[0] = cert.psi[a][p[n - 1]];
    for (std::size_t t = 1; t < n; ++t) q[t] = p[t - 1];
    const std::size_t target = index_of(a2, q);
    for (std::size_t t = 0; t < n; ++t) {
      if (amalgam.factors[target][t] != blocks[a2][q[t]]) fail_internal("amalgam enumeration order changed");
    }
    image[r] = target;
  }
  cert.h = AlgebraAutomorphism(amalgam.result, Permutation(std::move(image)));
  return cert;
}

AlgebraPairTower build_pair_tower_algebra(std::size_t n, std::size_t steps, std::uint64_t seed, bool dyadic) {
  if (n == 0) fail_precondition("root order must be positive");
  Rng rng(seed);
  AlgebraPairTower tower;
  tower.n = n;
  tower.seed = seed;
  tower.dyadic = dyadic;

  const auto trivial = EquidistributedAlgebra::trivial();
  tower.stages.push_back({std::nullopt, AlgebraAutomorphism::identity(trivial), AlgebraAutomorphism::identity(trivial)});

  std::size_t refinements = 0;
  auto next_split = [&]() -> std::size_t { return dyadic || refinements++ % 2 == 0 ? 2 : 3; };

  for (std::size_t step = 0; step < steps; ++step) {
    const auto& current = tower.stages.back();
    // B ⊇ Aᵢ with k ⊇ gᵢ.
    const auto into_b = refine_algebra(current.algebra(), next_split());
    const auto k_aut = random_extension(into_b, current.g, rng);
    // D ⊇ B with p ⊇ kⁿ.
    const auto into_d = refine_algebra(into_b.super, next_split());
    const auto p_aut = random_extension(into_d, power(k_aut, static_cast<std::int64_t>(n)), rng);
    // E ⊇ D with q ⊇ k and qⁿ ⊇ p.
    auto cert = nth_root_extension_algebra(into_d, k_aut, p_aut, n);
    auto inclusion = compose(compose(into_b, into_d), cert.top_inclusion());
    auto q_aut = cert.h;
    auto f_aut = power(q_aut, static_cast<std::int64_t>(n));
    tower.stages.push_back({std::move(inclusion), std::move(q_aut), std::move(f_aut)});
  }
  return tower;
}

namespace {

struct Coarsening {
  SubalgebraInclusion inclusion;
  AlgebraAutomorphism root;  // automorphism of the coarse algebra whose n-th power is f there
};

/// An f-invariant equidistributed subalgebra on which f has an n-th root.
/// Each f-cycle of length L is cut into d = L/κ residue classes of size κ,
/// so f induces d-cycles on the classes. Those have an n-th root when the
/// d-cycles can be grouped t at a time with gcd(d·t, n) = t: a (d·t)-cycle
/// raised to the n-th power splits into exactly such a group. The least
/// workable κ ≥ 2 wins, then κ = 1 (A = B).
std::optional<Coarsening> invariant_coarsening(const AlgebraAutomorphism& f, std::size_t n) {
  const auto cycles = f.perm.cycles();
  std::size_t common = 0;
  for (const auto& c : cycles) common = std::gcd(common, c.size());
  std::vector<std::size_t> candidates;
  for (std::size_t kappa = 2; kappa <= common; ++kappa) {
    if (common % kappa == 0) candidates.push_back(kappa);
  }
  candidates.push_back(1);

  for (const std::size_t kappa : candidates) {
    // Cycles of f grouped by the length d = L/κ of the induced cycle.
    std::map<std::size_t, std::vector<std::size_t>> by_length;
    for (std::size_t c = 0; c < cycles.size(); ++c) by_length[cycles[c].size() / kappa].push_back(c);
    std::map<std::size_t, std::size_t> group;
    bool ok = true;
    for (const auto& [d, members] : by_length) {
      std::size_t chosen = 0;
      for (std::size_t t = 1; t <= n && !chosen; ++t) {
        if (n % t == 0 && std::gcd(d * t, n) == t && members.size() % t == 0) chosen = t;
      }
      if (!chosen) {
        ok = false;
        break;
      }
      group[d] = chosen;
    }
    if (!ok) continue;

    std::vector<std::string> labels;
    std::vector<std::size_t> block_map(f.algebra.size());
    std::vector<std::vector<std::size_t>> classes(cycles.size());  // class index of each residue r
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const auto& cyc = cycles[c];
      const std::size_t d = cyc.size() / kappa;
      for (std::size_t r = 0; r < d; ++r) {
        classes[c].push_back(labels.size());
        labels.push_back("[" + f.algebra.label(cyc[r]) + "]");
        for (std::size_t t = r; t < cyc.size(); t += d) block_map[cyc[t]] = classes[c][r];
      }
    }
    // Cycle x₀ … x_{dt−1} of the root, with x_{(i + s·n) mod dt} = class s of the i-th grouped cycle.
    std::vector<std::size_t> root_image(labels.size());
    for (const auto& [d, members] : by_length) {
      const std::size_t t = group[d];
      for (std::size_t g0 = 0; g0 < members.size(); g0 += t) {
        std::vector<std::size_t> x(d * t);
        for (std::size_t i = 0; i < t; ++i) {
          for (std::size_t s2 = 0; s2 < d; ++s2) x[(i + s2 * n) % (d * t)] = classes[members[g0 + i]][s2];
        }
        for (std::size_t j = 0; j < x.size(); ++j) root_image[x[j]] = x[(j + 1) % x.size()];
      }
    }
    EquidistributedAlgebra coarse(std::move(labels));
    AlgebraAutomorphism root(coarse, Permutation(std::move(root_image)));
    return Coarsening{SubalgebraInclusion(std::move(coarse), f.algebra, std::move(block_map)), std::move(root)};
  }
  return std::nullopt;
}

}  // namespace

AlgebraRootTower build_root_tower_algebra(std::size_t depth, std::uint64_t seed) {
  if (depth == 0) fail_precondition("a root tower needs at least one stage");
  Rng rng(seed);
  AlgebraRootTower tower;
  tower.seed = seed;

  // g₁: a random permutation whose cycles all share one length, 2 or 4.
  // Every later generator has cycle lengths divisible by it, and an odd
  // length can leave the 4th root with no invariant subalgebra short of
  // the trivial one.
  const std::size_t len = rng.coin() ? 4 : 2;
  const std::size_t count = static_cast<std::size_t>(rng.between(1, 2));
  auto order = Permutation::identity(len * count).image();
  rng.shuffle(order);
  std::vector<std::size_t> image(len * count);
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t t = 0; t < len; ++t) image[order[c * len + t]] = order[c * len + (t + 1) % len];
  }
  tower.stages.push_back(
      {std::nullopt, AlgebraAutomorphism(labelled_algebra(len * count), Permutation(std::move(image)))});

  for (std::size_t n = 2; n <= depth; ++n) {
    const auto& f = tower.stages.back().generator;
    auto coarse = invariant_coarsening(f, n);
    if (!coarse) {
      // The trivial subalgebra always works: f is the identity there.
      const auto trivial = EquidistributedAlgebra::trivial();
      coarse = Coarsening{SubalgebraInclusion(trivial, f.algebra, std::vector<std::size_t>(f.algebra.size(), 0)),
                          AlgebraAutomorphism::identity(trivial)};
    }
    auto cert = nth_root_extension_algebra(coarse->inclusion, coarse->root, f, n);
    tower.stages.push_back({cert.top_inclusion(), cert.h});
  }
  return tower;
}

AlgebraAutomorphism q_action_algebra(const AlgebraRootTower& tower, std::int64_t k, std::size_t m) {
  if (m == 0 || m > tower.stages.size()) {
    fail_precondition("stage " + std::to_string(m) + " outside the tower (1.." + std::to_string(tower.stages.size()) + ")");
  }
  return power(tower.stages[m - 1].generator, k);
}

SubalgebraInclusion tower_inclusion(const AlgebraRootTower& tower, std::size_t from, std::size_t to) {
  if (from == 0 || from > to || to > tower.stages.size()) fail_precondition("stage range outside the tower");
  SubalgebraInclusion acc = refine_algebra(tower.stages[from - 1].algebra(), 1);
  for (std::size_t s = from + 1; s <= to; ++s) acc = compose(acc, *tower.stages[s - 1].from_previous);
  return acc;
}

}  // namespace urysohn
