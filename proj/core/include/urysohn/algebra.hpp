#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "urysohn/permutation.hpp"
#include "urysohn/rational.hpp"

namespace urysohn {

/// Finite boolean algebra whose atoms all carry measure 1/(atom count).
///
/// Elements other than atoms are represented as sorted sets of atom
/// indices; every construction in this library acts on atoms.
class EquidistributedAlgebra {
 public:
  EquidistributedAlgebra() = default;
  /// Labels must be non-empty and pairwise distinct.
  explicit EquidistributedAlgebra(std::vector<std::string> atoms);

  /// The two-element algebra {0, 1}; its single atom is labelled "1".
  static EquidistributedAlgebra trivial();

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const std::string& label(std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> find(const std::string& label) const;
  /// Like find, but a missing label is a parse error.
  std::size_t index_of(const std::string& label) const;

  Rational atom_measure() const;
  bool dyadic() const noexcept;

  friend bool operator==(const EquidistributedAlgebra& a, const EquidistributedAlgebra& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// sub ⊆ super, recorded as the sub-atom each super-atom lies below.
/// Every sub-atom is the join of the same number of super-atoms.
struct SubalgebraInclusion {
  EquidistributedAlgebra sub;
  EquidistributedAlgebra super;
  std::vector<std::size_t> block_map;

  SubalgebraInclusion() = default;
  SubalgebraInclusion(EquidistributedAlgebra sub, EquidistributedAlgebra super,
                      std::vector<std::size_t> block_map);

  std::size_t block_size() const { return super.size() / sub.size(); }
  /// Super-atoms below each sub-atom, ascending by index.
  std::vector<std::vector<std::size_t>> blocks() const;
};

/// (A ⊆ B) then (B ⊆ C) gives A ⊆ C.
SubalgebraInclusion compose(const SubalgebraInclusion& lower, const SubalgebraInclusion& upper);

struct AlgebraAutomorphism {
  EquidistributedAlgebra algebra;
  Permutation perm;

  AlgebraAutomorphism() = default;
  AlgebraAutomorphism(EquidistributedAlgebra algebra, Permutation perm);

  static AlgebraAutomorphism identity(EquidistributedAlgebra algebra);
};

AlgebraAutomorphism power(const AlgebraAutomorphism& g, std::int64_t k);
AlgebraAutomorphism compose(const AlgebraAutomorphism& outer, const AlgebraAutomorphism& inner);

/// Does `upper` map every super-atom below a into the block of lower(a)?
/// This is "upper extends lower" read through the inclusion.
bool restricts_to(const SubalgebraInclusion& inclusion, const AlgebraAutomorphism& upper,
                  const AlgebraAutomorphism& lower);

/// A measure-preserving isomorphism between two subalgebras of `ambient`,
/// each given as a partition of the ambient atoms into blocks.
struct PartialAlgebraAutomorphism {
  EquidistributedAlgebra ambient;
  std::vector<std::vector<std::size_t>> source_blocks;
  std::vector<std::vector<std::size_t>> target_blocks;
  std::vector<std::size_t> block_bijection;  // source block -> target block
};

/// Free amalgam of the parts over their common subalgebra.
struct AlgebraAmalgam {
  EquidistributedAlgebra base;
  std::vector<SubalgebraInclusion> parts;
  EquidistributedAlgebra result;
  /// factors[r][i] is the part-i atom in the product forming result atom r.
  std::vector<std::vector<std::size_t>> factors;
  /// Base atom every factor of result atom r lies below.
  std::vector<std::size_t> base_of;

  /// πᵢ(b): result atoms whose i-th factor is b, ascending.
  std::vector<std::size_t> embed(std::size_t part, std::size_t atom) const;
  /// Result atoms below the base atom a; equals πᵢ(ιᵢ(a)) for every i.
  std::vector<std::size_t> diagonal(std::size_t base_atom) const;
  /// The inclusion of part i into the result induced by πᵢ.
  SubalgebraInclusion part_inclusion(std::size_t part) const;
};

/// Product label separator.
inline constexpr const char* kTensor = "⊗";

AlgebraAmalgam free_amalgam_algebra(const EquidistributedAlgebra& base,
                                    const std::vector<SubalgebraInclusion>& parts);

/// μ(b₁⊗…⊗bₙ) = μ₁(b₁)⋯μₙ(bₙ) / μ(a)^{n−1}.
Rational amalgam_measure(std::span<const Rational> factors, const Rational& base_atom_measure);

/// Extends block by block, matching atoms in ascending label order.
AlgebraAutomorphism extend_partial_automorphism(const PartialAlgebraAutomorphism& g);

/// Each atom of `a` split into `split` children labelled "<atom>.<j>".
/// split == 1 returns the identity inclusion.
SubalgebraInclusion refine_algebra(const EquidistributedAlgebra& a, std::size_t split);

}  // namespace urysohn
