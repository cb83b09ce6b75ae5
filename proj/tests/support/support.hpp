#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urysohn/algebra.hpp"
#include "urysohn/graph.hpp"
#include "urysohn/metric.hpp"
#include "urysohn/random.hpp"
#include "urysohn/rohlin.hpp"

namespace urysohn::testing {

// Oracles. Each recomputes its answer the slow, obvious way.

/// p composed with itself |k| times by repeated composition.
Permutation naive_power(const Permutation& p, std::int64_t k);
/// Composes p with itself until the identity appears.
std::uint64_t naive_order(const Permutation& p);
/// Minimum weight over all simple paths, by depth-first enumeration.
DistanceMatrix enumerate_simple_paths(const WeightedGraph& g);
/// Pairs (b₁, …, bₙ) of part atoms lying below a common base atom.
std::vector<std::vector<std::size_t>> compatible_tuples(const std::vector<SubalgebraInclusion>& parts);
/// Exhaustive metric-axiom scan independent of verify_metric.
bool is_metric(const FiniteMetricSpace& s);
bool preserves_distances(const FiniteMetricSpace& src, const FiniteMetricSpace& dst, const std::vector<std::size_t>& map);

// Instance generators.

struct DyadicInstance {
  std::size_t m = 0;               // base has 2^m atoms
  std::vector<std::size_t> k;      // part i has 2^{k_i} atoms
  EquidistributedAlgebra base;
  std::vector<SubalgebraInclusion> parts;
};
/// n parts over a base of 2^m atoms; part i has 2^{k_i} atoms with m ≤ k_i ≤ max_k
/// and randomly shuffled block assignments.
DyadicInstance random_dyadic_instance(Rng& rng, std::size_t n, std::size_t m, std::size_t max_k);

/// A random equal-block inclusion of `sub_atoms` atoms into sub_atoms·block atoms.
SubalgebraInclusion random_inclusion(Rng& rng, std::size_t sub_atoms, std::size_t block);

struct AlgebraRootInstance {
  SubalgebraInclusion base;
  AlgebraAutomorphism g;
  AlgebraAutomorphism f;
  std::size_t n = 1;
};
/// |A| ≤ max_a, |B| ≤ max_b, n ≤ max_n, with |A|·(|B|/|A|)ⁿ ≤ max_ambient.
AlgebraRootInstance random_algebra_root_instance(Rng& rng, std::size_t max_a, std::size_t max_b, std::size_t max_n,
                                                 std::size_t max_ambient);

struct MetricAmalgamInstance {
  FiniteMetricSpace base;
  std::vector<IsometricEmbedding> parts;
};
/// Base of 1..max_base points, 1..max_parts parts of at most max_part points.
MetricAmalgamInstance random_metric_amalgam_instance(Rng& rng, std::size_t max_base, std::size_t max_parts,
                                                     std::size_t max_part);

struct MetricRootInstance {
  IsometricEmbedding base;
  Isometry f;
  Isometry g;
  std::size_t n = 1;
};
/// (A, f) random with |A| ≤ max_a; B grows A by orbit closures under fⁿ up to max_b points.
MetricRootInstance random_metric_root_instance(Rng& rng, std::size_t max_a, std::size_t max_b, std::size_t max_n);

struct SuspensionInstance {
  SeparatedMap map;
  std::size_t s = 0;
};
/// A random isometric map on at most max_a points, separated so that the
/// least admissible period is at most max_s; s is drawn from the admissible
/// range up to max_s.
SuspensionInstance random_suspension_instance(Rng& rng, std::size_t max_a, std::size_t max_s);

/// The least s ≥ 3 with δ·(s−2) ≥ Δ.
std::size_t least_period(const CarriedMap& f);

/// A path of `length` points moving by −1, 0 or +1 each step.
Path random_path(Rng& rng, const SuspensionContext& ctx, std::size_t length);

// Mutation testing.

/// Changes one entry of `blob`: a value of some label map (an object whose
/// values are labels, at least two distinct) becomes another of its values,
/// or one entry of some distance matrix grows by 1/1000000. Returns a
/// description of the change, or nullopt when nothing is mutable.
std::optional<std::string> mutate(nlohmann::json& blob, Rng& rng);

/// One certificate or structure of every kind the verifier accepts, built
/// from `seed`.
std::vector<nlohmann::json> mixed_certificates(std::uint64_t seed);

}  // namespace urysohn::testing
