#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "urysohn/metric.hpp"

namespace urysohn {

/// Witness that h, an isometry of the amalgam of n copies of B over A with
/// ιᵢ = ι∘f^{−i}, restricts to f on A and satisfies hⁿ∘π₁ = π₁∘g.
struct MetricRootCertificate {
  IsometricEmbedding base_inclusion;  // ι: A → B
  Isometry f;                         // of A
  Isometry g;                         // of B, with g∘ι = ι∘fⁿ
  std::size_t n = 1;
  FiniteMetricSpace ambient;
  std::vector<IsometricEmbedding> copies;     // ιᵢ for i = 1..n
  std::vector<std::vector<std::size_t>> pi;   // πᵢ: B → ambient for i = 1..n
  std::vector<std::size_t> base_in_ambient;   // A → ambient, equal to πᵢ∘ιᵢ for every i
  Isometry h;

  /// B inside the ambient space through π₁.
  IsometricEmbedding top_inclusion() const { return IsometricEmbedding(g.space, ambient, pi.front()); }
};

/// Builds h. For n = 1 the ambient space is B itself, h = g, π₁ = id and A
/// sits in B through ι∘f⁻¹.
MetricRootCertificate nth_root_extension_isometry(const IsometricEmbedding& base, const Isometry& f, const Isometry& g,
                                                  std::size_t n);

struct MetricTowerStage {
  std::optional<IsometricEmbedding> from_previous;  // empty at stage 0
  Isometry g;
  Isometry f;

  const FiniteMetricSpace& space() const { return g.space; }
};

struct MetricPairTower {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::size_t root_every = 1;
  std::vector<MetricTowerStage> stages;
};

/// Stage 0 is empty. Every step closes the current space under gᵢ around a
/// random Katetov point. Every `root_every`-th step then also adjoins a
/// random point to the orbit closure under the n-th power and takes the
/// n-th root extension; other steps just carry fᵢ = gᵢⁿ along.
MetricPairTower build_pair_tower_isometry(std::size_t n, std::size_t steps, std::uint64_t seed,
                                          std::size_t root_every = 1);

struct MetricRootTowerStage {
  std::optional<IsometricEmbedding> from_previous;  // empty at the first stage
  Isometry generator;

  const FiniteMetricSpace& space() const { return generator.space; }
};

/// stages[m-1] carries g_m, and g_{m+1}^{m+1}∘π₁ = π₁∘g_m.
struct MetricRootTower {
  std::uint64_t seed = 0;
  std::vector<MetricRootTowerStage> stages;
};

MetricRootTower build_root_tower_isometry(std::size_t depth, std::uint64_t seed);

/// g_m^k at stage m (1-based).
Isometry q_action_isometry(const MetricRootTower& tower, std::int64_t k, std::size_t m);

/// Embedding of stage `from` into stage `to` (1-based, from ≤ to).
IsometricEmbedding tower_embedding(const MetricRootTower& tower, std::size_t from, std::size_t to);

/// (A → B) then (B → C).
IsometricEmbedding compose(const IsometricEmbedding& lower, const IsometricEmbedding& upper);

}  // namespace urysohn
