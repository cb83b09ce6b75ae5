#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace urysohn {

/// Bijection of {0, ..., size-1}, stored as its image table.
class Permutation {
 public:
  Permutation() = default;
  /// Throws a precondition error unless `image` is a bijection.
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t size);
  /// Single cycle through `points` in the given order; other points fixed.
  static Permutation cycle(std::size_t size, std::span<const std::size_t> points);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  bool is_identity() const noexcept;
  Permutation inverse() const;

  /// Disjoint cycles, each starting at its least element, ordered by that element.
  /// Fixed points appear as cycles of length one.
  std::vector<std::vector<std::size_t>> cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

/// (outer ∘ inner)(i) = outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// p composed with itself k times; negative k uses the inverse. Computed
/// cycle by cycle, so huge exponents cost nothing extra.
Permutation permutation_power(const Permutation& p, std::int64_t k);

/// Least m >= 1 with p^m = identity (lcm of the cycle lengths).
std::uint64_t permutation_order(const Permutation& p);

bool is_bijection(std::span<const std::size_t> image);

}  // namespace urysohn
