#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "urysohn/algebra.hpp"

namespace urysohn {

/// Witness that h, an automorphism of the n-fold amalgam of B over A,
/// extends g through the diagonal and that hⁿ extends f through πₙ.
struct AlgebraRootCertificate {
  SubalgebraInclusion base;  // A ⊆ B
  AlgebraAutomorphism g;     // of A
  AlgebraAutomorphism f;     // of B, with f|A = gⁿ
  std::size_t n = 1;
  AlgebraAmalgam ambient;    // n copies of B over A; copy i relabelled "<atom>@i"
  AlgebraAutomorphism h;     // of ambient.result
  /// f(bᵢʲ) = b_{φⁿ(i)}^{ψ(i,j)}, where bᵢʲ is the j-th atom (ascending
  /// index, 0-based) below the i-th atom of A.
  std::vector<std::vector<std::size_t>> psi;

  /// B ⊆ ambient through πₙ.
  SubalgebraInclusion top_inclusion() const {
    return SubalgebraInclusion(base.super, ambient.result, ambient.part_inclusion(n - 1).block_map);
  }
};

/// Builds h with h ⊇ g and hⁿ|B = f. For n = 1 the ambient algebra is B
/// itself and h = f.
AlgebraRootCertificate nth_root_extension_algebra(const SubalgebraInclusion& base, const AlgebraAutomorphism& g,
                                                  const AlgebraAutomorphism& f, std::size_t n);

struct AlgebraTowerStage {
  std::optional<SubalgebraInclusion> from_previous;  // empty at stage 0
  AlgebraAutomorphism g;
  AlgebraAutomorphism f;

  const EquidistributedAlgebra& algebra() const { return g.algebra; }
};

/// Finite stages of a pair (g, f = gⁿ) built by back-and-forth.
struct AlgebraPairTower {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  bool dyadic = false;
  std::vector<AlgebraTowerStage> stages;
};

/// Each step refines the current algebra, extends gᵢ to it at random,
/// refines again carrying a random extension of the n-th power, and closes
/// with nth_root_extension_algebra. Split factors cycle 2, 3, 2, 3, ...
/// (always 2 when `dyadic`).
AlgebraPairTower build_pair_tower_algebra(std::size_t n, std::size_t steps, std::uint64_t seed, bool dyadic = false);

struct RootTowerStage {
  std::optional<SubalgebraInclusion> from_previous;  // empty at the first stage
  AlgebraAutomorphism generator;

  const EquidistributedAlgebra& algebra() const { return generator.algebra; }
};

/// stages[m-1] carries g_m, and g_{m+1}^{m+1} restricts to g_m.
struct AlgebraRootTower {
  std::uint64_t seed = 0;
  std::vector<RootTowerStage> stages;
};

AlgebraRootTower build_root_tower_algebra(std::size_t depth, std::uint64_t seed);

/// g_m^k, the action of k/m! at stage m (1-based).
AlgebraAutomorphism q_action_algebra(const AlgebraRootTower& tower, std::int64_t k, std::size_t m);

/// Inclusion of stage `from` into stage `to` (1-based, from ≤ to).
SubalgebraInclusion tower_inclusion(const AlgebraRootTower& tower, std::size_t from, std::size_t to);

/// Upper bound on the atom count of any algebra the tower builders create.
inline constexpr std::size_t kMaxTowerAtoms = std::size_t{1} << 18;

}  // namespace urysohn
