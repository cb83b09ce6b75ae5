#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "urysohn/algebra.hpp"
#include "urysohn/metric.hpp"
#include "urysohn/permutation.hpp"
#include "urysohn/rational.hpp"

namespace urysohn {

/// Seeded generator whose bounded draws do not depend on the standard
/// library's distribution implementations, so a seed reproduces the same
/// structures on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool coin() { return below(2) == 1; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::int64_t kDefaultDenominatorCap = 12;

Permutation random_permutation(std::size_t size, Rng& rng);

/// Random automorphism of `inclusion.super` extending g on `inclusion.sub`:
/// the ascending-label extension followed by a random shuffle inside each
/// block.
AlgebraAutomorphism random_extension(const SubalgebraInclusion& inclusion, const AlgebraAutomorphism& g,
                                     Rng& rng);

/// A rational in [lo, hi] (hi may be absent: unbounded) with denominator at
/// most `cap`; lo ≥ 0 and the result is always positive.
Rational random_rational_in(const Rational& lo, const std::optional<Rational>& hi, std::int64_t cap, Rng& rng);

/// Distances from a new point to every point of `space` forming a valid
/// Katetov function. Each value is drawn with denominator ≤ cap and clamped
/// into the interval left open by the previously drawn values.
std::vector<Rational> random_katetov(const FiniteMetricSpace& space, Rng& rng,
                                     std::int64_t cap = kDefaultDenominatorCap);

/// Points "p0", "p1", ... added one random Katetov extension at a time.
FiniteMetricSpace random_metric_space(std::size_t points, Rng& rng, std::int64_t cap = kDefaultDenominatorCap,
                                      const std::string& prefix = "p");

/// A random space with a (usually non-trivial) isometry: a regular simplex
/// whose vertices are cycled, grown by orbit-closure extensions up to
/// `max_points` points.
Isometry random_isometry(std::size_t max_points, Rng& rng, std::int64_t cap = kDefaultDenominatorCap);

EquidistributedAlgebra labelled_algebra(std::size_t atoms, const std::string& prefix = "e");

}  // namespace urysohn
