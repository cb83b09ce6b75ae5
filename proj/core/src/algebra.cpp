#include "urysohn/algebra.hpp"

#include <algorithm>
#include <numeric>

#include "urysohn/error.hpp"

namespace urysohn {

EquidistributedAlgebra::EquidistributedAlgebra(std::vector<std::string> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) fail_precondition("an algebra needs at least one atom");
  index_.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].empty()) fail_precondition("atom labels must be non-empty");
    if (!index_.emplace(atoms_[i], i).second) fail_precondition("duplicate atom label '" + atoms_[i] + "'");
  }
}

EquidistributedAlgebra EquidistributedAlgebra::trivial() { return EquidistributedAlgebra({"1"}); }

std::optional<std::size_t> EquidistributedAlgebra::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EquidistributedAlgebra::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) fail_parse("unknown atom '" + label + "'");
  return *i;
}

Rational EquidistributedAlgebra::atom_measure() const {
  if (atoms_.empty()) fail_precondition("empty algebra has no atom measure");
  return Rational(1, static_cast<std::int64_t>(atoms_.size()));
}

bool EquidistributedAlgebra::dyadic() const noexcept {
  const auto n = atoms_.size();
  return n != 0 && (n & (n - 1)) == 0;
}

SubalgebraInclusion::SubalgebraInclusion(EquidistributedAlgebra sub_, EquidistributedAlgebra super_,
                                         std::vector<std::size_t> block_map_)
    : sub(std::move(sub_)), super(std::move(super_)), block_map(std::move(block_map_)) {
  if (block_map.size() != super.size()) fail_precondition("block map must cover every super-atom");
  if (sub.size() == 0 || super.size() % sub.size() != 0) {
    fail_precondition("sub-atom count must divide super-atom count");
  }
  std::vector<std::size_t> count(sub.size(), 0);
  for (std::size_t s : block_map) {
    if (s >= sub.size()) fail_precondition("block map names a missing sub-atom");
    ++count[s];
  }
  const std::size_t want = super.size() / sub.size();
  for (std::size_t a = 0; a < sub.size(); ++a) {
    if (count[a] != want) {
      fail_precondition("sub-atom '" + sub.label(a) + "' is the join of " + std::to_string(count[a]) +
                        " super-atoms, expected " + std::to_string(want));
    }
  }
}

std::vector<std::vector<std::size_t>> SubalgebraInclusion::blocks() const {
  std::vector<std::vector<std::size_t>> out(sub.size());
  for (std::size_t b = 0; b < block_map.size(); ++b) out[block_map[b]].push_back(b);
  return out;
}

SubalgebraInclusion compose(const SubalgebraInclusion& lower, const SubalgebraInclusion& upper) {
  if (!(lower.super == upper.sub)) fail_precondition("inclusions do not chain");
  std::vector<std::size_t> map(upper.super.size());
  for (std::size_t c = 0; c < map.size(); ++c) map[c] = lower.block_map[upper.block_map[c]];
  return SubalgebraInclusion(lower.sub, upper.super, std::move(map));
}

AlgebraAutomorphism::AlgebraAutomorphism(EquidistributedAlgebra algebra_, Permutation perm_)
    : algebra(std::move(algebra_)), perm(std::move(perm_)) {
  if (perm.size() != algebra.size()) fail_precondition("automorphism size does not match its algebra");
}

AlgebraAutomorphism AlgebraAutomorphism::identity(EquidistributedAlgebra algebra) {
  auto n = algebra.size();
  return AlgebraAutomorphism(std::move(algebra), Permutation::identity(n));
}

AlgebraAutomorphism power(const AlgebraAutomorphism& g, std::int64_t k) {
  return AlgebraAutomorphism(g.algebra, permutation_power(g.perm, k));
}

AlgebraAutomorphism compose(const AlgebraAutomorphism& outer, const AlgebraAutomorphism& inner) {
  if (!(outer.algebra == inner.algebra)) fail_precondition("composing automorphisms of different algebras");
  return AlgebraAutomorphism(outer.algebra, compose(outer.perm, inner.perm));
}

bool restricts_to(const SubalgebraInclusion& inclusion, const AlgebraAutomorphism& upper,
                  const AlgebraAutomorphism& lower) {
  if (upper.perm.size() != inclusion.super.size() || lower.perm.size() != inclusion.sub.size()) {
    return false;
  }
  for (std::size_t b = 0; b < inclusion.super.size(); ++b) {
    if (inclusion.block_map[upper.perm(b)] != lower.perm(inclusion.block_map[b])) return false;
  }
  return true;
}

std::vector<std::size_t> AlgebraAmalgam::embed(std::size_t part, std::size_t atom) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < factors.size(); ++r) {
    if (factors[r][part] == atom) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> AlgebraAmalgam::diagonal(std::size_t base_atom) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < base_of.size(); ++r) {
    if (base_of[r] == base_atom) out.push_back(r);
  }
  return out;
}

SubalgebraInclusion AlgebraAmalgam::part_inclusion(std::size_t part) const {
  std::vector<std::size_t> map(factors.size());
  for (std::size_t r = 0; r < factors.size(); ++r) map[r] = factors[r][part];
  return SubalgebraInclusion(parts.at(part).super, result, std::move(map));
}

AlgebraAmalgam free_amalgam_algebra(const EquidistributedAlgebra& base,
                                    const std::vector<SubalgebraInclusion>& parts) {
  if (parts.empty()) fail_precondition("free amalgam needs at least one part");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].sub == base)) {
      fail_precondition("part " + std::to_string(i + 1) + " is not built over the given base");
    }
  }
  const std::size_t n = parts.size();
  std::vector<std::vector<std::vector<std::size_t>>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = parts[i].blocks();

  AlgebraAmalgam out;
  out.base = base;
  out.parts = parts;
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < base.size(); ++a) {
    // Odometer over one atom per part below a; the last factor varies fastest.
    std::vector<std::size_t> pos(n, 0);
    for (bool more = true; more;) {
      std::vector<std::size_t> tuple(n);
      std::string label;
      for (std::size_t i = 0; i < n; ++i) {
        tuple[i] = blocks[i][a][pos[i]];
        if (i) label += kTensor;
        label += parts[i].super.label(tuple[i]);
      }
      out.factors.push_back(std::move(tuple));
      out.base_of.push_back(a);
      labels.push_back(std::move(label));

      more = false;
      for (std::size_t i = n; i-- > 0;) {
        if (++pos[i] < blocks[i][a].size()) {
          more = true;
          break;
        }
        pos[i] = 0;
      }
    }
  }
  out.result = EquidistributedAlgebra(std::move(labels));

  std::vector<Rational> measures;
  for (std::size_t i = 0; i < n; ++i) measures.push_back(parts[i].super.atom_measure());
  if (amalgam_measure(measures, base.atom_measure()) != out.result.atom_measure()) {
    fail_internal("free amalgam is not equidistributed");
  }
  return out;
}

Rational amalgam_measure(std::span<const Rational> factors, const Rational& base_atom_measure) {
  if (factors.empty()) fail_precondition("amalgam measure needs at least one factor");
  if (base_atom_measure.is_zero()) fail_precondition("base atom measure is zero");
  Rational product(1);
  for (const auto& m : factors) {
    if (m.sign() <= 0 || m > Rational(1)) fail_precondition("atom measure " + m.str() + " outside (0,1]");
    product *= m;
  }
  return product / base_atom_measure.pow(static_cast<long>(factors.size()) - 1);
}

namespace {

void check_partition(const std::vector<std::vector<std::size_t>>& blocks, std::size_t atoms,
                     const char* which) {
  std::vector<bool> seen(atoms, false);
  std::size_t covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) fail_precondition(std::string(which) + " partition has an empty block");
    for (std::size_t x : block) {
      if (x >= atoms || seen[x]) fail_precondition(std::string(which) + " blocks do not partition the atoms");
      seen[x] = true;
      ++covered;
    }
  }
  if (covered != atoms) fail_precondition(std::string(which) + " blocks do not cover the atoms");
}

}  // namespace

AlgebraAutomorphism extend_partial_automorphism(const PartialAlgebraAutomorphism& g) {
  const auto& A = g.ambient;
  check_partition(g.source_blocks, A.size(), "source");
  check_partition(g.target_blocks, A.size(), "target");
  if (g.block_bijection.size() != g.source_blocks.size() ||
      g.target_blocks.size() != g.source_blocks.size() || !is_bijection(g.block_bijection)) {
    fail_precondition("block map is not a bijection between source and target blocks");
  }
  auto by_label = [&A](std::vector<std::size_t> block) {
    std::sort(block.begin(), block.end(),
              [&A](std::size_t x, std::size_t y) { return A.label(x) < A.label(y); });
    return block;
  };
  std::vector<std::size_t> image(A.size());
  for (std::size_t s = 0; s < g.source_blocks.size(); ++s) {
    const auto src = by_label(g.source_blocks[s]);
    const auto dst = by_label(g.target_blocks[g.block_bijection[s]]);
    if (src.size() != dst.size()) {
      fail_precondition("block of " + std::to_string(src.size()) + " atoms sent to a block of " +
                        std::to_string(dst.size()) + ": not measure preserving");
    }
    for (std::size_t j = 0; j < src.size(); ++j) image[src[j]] = dst[j];
  }
  return AlgebraAutomorphism(A, Permutation(std::move(image)));
}

SubalgebraInclusion refine_algebra(const EquidistributedAlgebra& a, std::size_t split) {
  if (split == 0) fail_precondition("split factor must be positive");
  if (split == 1) {
    std::vector<std::size_t> id(a.size());
    std::iota(id.begin(), id.end(), std::size_t{0});
    return SubalgebraInclusion(a, a, std::move(id));
  }
  std::vector<std::string> labels;
  std::vector<std::size_t> map;
  labels.reserve(a.size() * split);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < split; ++j) {
      labels.push_back(a.label(i) + "." + std::to_string(j));
      map.push_back(i);
    }
  }
  return SubalgebraInclusion(a, EquidistributedAlgebra(std::move(labels)), std::move(map));
}

}  // namespace urysohn
