#include "urysohn/random.hpp"

#include <algorithm>
#include <limits>

#include "urysohn/error.hpp"

namespace urysohn {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail_precondition("empty sampling range");
  // Rejection sampling keeps the draw unbiased and implementation-independent.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail_precondition("empty sampling range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Permutation random_permutation(std::size_t size, Rng& rng) {
  auto image = Permutation::identity(size).image();
  rng.shuffle(image);
  return Permutation(std::move(image));
}

AlgebraAutomorphism random_extension(const SubalgebraInclusion& inclusion, const AlgebraAutomorphism& g, Rng& rng) {
  PartialAlgebraAutomorphism partial;
  partial.ambient = inclusion.super;
  partial.source_blocks = inclusion.blocks();
  partial.target_blocks = partial.source_blocks;
  partial.block_bijection = g.perm.image();
  const auto ext = extend_partial_automorphism(partial);

  std::vector<std::size_t> shuffle(inclusion.super.size());
  for (auto block : inclusion.blocks()) {
    auto targets = block;
    rng.shuffle(targets);
    for (std::size_t j = 0; j < block.size(); ++j) shuffle[block[j]] = targets[j];
  }
  return AlgebraAutomorphism(inclusion.super, compose(Permutation(std::move(shuffle)), ext.perm));
}

Rational random_rational_in(const Rational& lo, const std::optional<Rational>& hi, std::int64_t cap, Rng& rng) {
  const std::int64_t den = rng.between(1, cap);
  const mpz_class d(static_cast<unsigned long>(den));
  // Numerators k/den inside [lo, hi], and strictly positive.
  const Rational lo_scaled = lo * Rational(den);
  mpz_class first;
  mpz_cdiv_q(first.get_mpz_t(), lo_scaled.numerator().get_mpz_t(), lo_scaled.denominator().get_mpz_t());
  if (first < 1) first = 1;
  mpz_class last;
  if (hi) {
    const Rational scaled = *hi * Rational(den);
    mpz_fdiv_q(last.get_mpz_t(), scaled.numerator().get_mpz_t(), scaled.denominator().get_mpz_t());
  } else {
    last = first + 2 * den;
  }
  if (last < first) {
    // No grid point of this denominator fits: clamp a draw into the interval.
    const Rational draw(rng.between(1, 2 * den), den);
    Rational v = max(lo, draw);
    if (hi) v = min(v, *hi);
    if (v.sign() <= 0) fail_internal("could not draw a positive rational");
    return v;
  }
  const mpz_class span = last - first + 1;
  if (!span.fits_ulong_p()) fail_precondition("sampling interval too wide");
  const mpz_class k = first + mpz_class(static_cast<unsigned long>(rng.below(span.get_ui())));
  return Rational(mpq_class(k, d));
}

std::vector<Rational> random_katetov(const FiniteMetricSpace& space, Rng& rng, std::int64_t cap) {
  std::vector<Rational> r;
  r.reserve(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) {
    Rational lo(0);
    std::optional<Rational> hi;
    for (std::size_t prev = 0; prev < c; ++prev) {
      lo = max(lo, (r[prev] - space.d(c, prev)).abs());
      Rational up = r[prev] + space.d(c, prev);
      hi = hi ? min(*hi, up) : up;
    }
    r.push_back(random_rational_in(lo, hi, cap, rng));
  }
  return r;
}

FiniteMetricSpace random_metric_space(std::size_t points, Rng& rng, std::int64_t cap, const std::string& prefix) {
  FiniteMetricSpace space;
  for (std::size_t i = 0; i < points; ++i) {
    auto r = random_katetov(space, rng, cap);
    space = one_point_extension(space, prefix + std::to_string(i), r);
  }
  return space;
}

Isometry random_isometry(std::size_t max_points, Rng& rng, std::int64_t cap) {
  if (max_points == 0) return Isometry::identity(FiniteMetricSpace());
  // Seed: a regular simplex on `seed` points, any permutation of which is an isometry.
  const std::size_t seed = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(max_points, 4))));
  const Rational side = random_rational_in(Rational(0), std::nullopt, cap, rng);
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> dist(seed, std::vector<Rational>(seed, side));
  for (std::size_t i = 0; i < seed; ++i) {
    labels.push_back("q" + std::to_string(i));
    dist[i][i] = Rational(0);
  }
  Isometry k(FiniteMetricSpace(std::move(labels), std::move(dist)), random_permutation(seed, rng));

  std::size_t next = 0;
  for (int attempts = 0; attempts < 8 && k.space.size() < max_points; ++attempts) {
    const auto r = random_katetov(k.space, rng, cap);
    auto grown = orbit_closure_extension(k, "r" + std::to_string(next), r);
    if (grown.extended.space.size() > max_points) continue;
    k = std::move(grown.extended);
    ++next;
  }
  return k;
}

EquidistributedAlgebra labelled_algebra(std::size_t atoms, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < atoms; ++i) labels.push_back(prefix + std::to_string(i));
  return EquidistributedAlgebra(std::move(labels));
}

}  // namespace urysohn
