#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/graph.hpp"
#include "urysohn/metric.hpp"

namespace urysohn {

/// A point map f: A → carrier where A is itself a set of carrier points.
struct CarriedMap {
  FiniteMetricSpace carrier;
  std::vector<std::size_t> domain;  // carrier index of each a ∈ A
  std::vector<std::size_t> image;   // carrier index of f(a)

  std::size_t size() const noexcept { return domain.size(); }
  const std::string& label(std::size_t a) const { return carrier.label(domain[a]); }
  /// d(a, b)
  const Rational& d(std::size_t a, std::size_t b) const { return carrier.d(domain[a], domain[b]); }
  /// d(a, f(b))
  const Rational& d_f(std::size_t a, std::size_t b) const { return carrier.d(domain[a], image[b]); }
  /// d(f(a), f(b))
  const Rational& d_ff(std::size_t a, std::size_t b) const { return carrier.d(image[a], image[b]); }
};

/// min over a, b of d(a, f(b)); zero for empty A.
Rational separation(const CarriedMap& f);
/// diam(A ∪ f[A]).
Rational spread(const CarriedMap& f);
/// d(f(a), f(b)) = d(a, b) for all a, b.
bool isometric_on_domain(const CarriedMap& f);

/// f lifted into C = B × {0, δ} with the ℓ1 metric. (b, 0) keeps the label
/// of b and (b, δ) is labelled "<b>*"; f(a) = (h(a), δ).
struct SeparatedMap : CarriedMap {
  Rational delta;
  std::vector<std::size_t> h_image;  // carrier index of (h(a), 0)
};

/// `domain` lists the points of A in `space`, `h[i]` the image of domain[i].
SeparatedMap delta_separate(const FiniteMetricSpace& space, const std::vector<std::size_t>& domain,
                            const std::vector<std::size_t>& h, const Rational& delta);

/// A and f together with a circular order of size s; x⁺ = x + 1 mod s.
struct SuspensionContext {
  CarriedMap map;
  std::size_t s = 0;

  std::size_t succ(std::size_t x) const { return (x + 1) % s; }
  std::size_t pred(std::size_t x) const { return (x + s - 1) % s; }
};

/// a•x
struct PathPoint {
  std::size_t a = 0;
  std::size_t x = 0;
  friend bool operator==(const PathPoint&, const PathPoint&) = default;
};
using Path = std::vector<PathPoint>;

/// +1 for y = x⁺, −1 for y = x⁻, 0 for y = x; anything else is an error.
int circular_move(const SuspensionContext& ctx, std::size_t x, std::size_t y);
/// d(a,b) if y = x, d(a,f(b)) if y = x⁺, d(f(a),b) if y = x⁻.
Rational rho(const SuspensionContext& ctx, PathPoint from, PathPoint to);
Rational path_length(const SuspensionContext& ctx, const Path& p);
bool is_positive(const SuspensionContext& ctx, const Path& p);
bool is_negative(const SuspensionContext& ctx, const Path& p);

/// Repeatedly drops the middle point of the leftmost triple whose two moves
/// are not both +1 or both −1. `cases`, if given, receives the number
/// (1..7) of each rewrite applied.
Path path_reduce(const SuspensionContext& ctx, Path p, std::vector<int>* cases = nullptr);

/// Vertex a•x has index x·|A| + a; edges carry ρ.
WeightedGraph step_graph(const SuspensionContext& ctx);

struct SuspensionSpace {
  SuspensionContext context;
  FiniteMetricSpace space;  // points "<a>•<x>" with the path metric D
  Isometry shift;           // a•x ↦ a•x⁺

  std::size_t point(std::size_t a, std::size_t x) const { return x * context.map.size() + a; }
};

/// Requires s ≥ 3, f isometric on A, separation δ > 0 and δ·(s−2) ≥ Δ.
SuspensionSpace circular_suspension(const CarriedMap& f, std::size_t s);

/// Admissible periods: an explicit list or the progression start, start+step, ...
class PeriodSet {
 public:
  static PeriodSet list(std::vector<std::size_t> values);
  static PeriodSet progression(std::size_t start, std::size_t step);
  static PeriodSet multiples_of(std::size_t k) { return progression(k, k); }
  /// "4,6,9" is a list; "2,4,6,…" (or "...") and "3,…" are progressions.
  static PeriodSet parse(const std::string& text);

  bool is_progression() const noexcept { return progression_; }
  const std::vector<std::size_t>& values() const noexcept { return values_; }
  std::size_t start() const noexcept { return start_; }
  std::size_t step() const noexcept { return step_; }

  bool contains(std::size_t s) const;
  std::size_t min() const;
  std::optional<std::size_t> least_at_least(std::size_t lower) const;
  std::string str() const;

 private:
  bool progression_ = false;
  std::vector<std::size_t> values_;
  std::size_t start_ = 0;
  std::size_t step_ = 0;
};

struct RohlinResult {
  Rational epsilon;
  SeparatedMap separated;  // over B = A ∪ h[A], δ = 3ε/4
  std::vector<std::size_t> base_points;  // indices in the input space of the points of B
  std::size_t s = 0;
  SuspensionSpace suspension;
  /// Suspension point of carrier point domain[a] (a•x₀) and image[a] (a•x₀⁺).
  std::vector<std::size_t> domain_in_suspension;
  std::vector<std::size_t> image_in_suspension;

  const FiniteMetricSpace& ambient() const { return suspension.space; }
  const Isometry& g() const { return suspension.shift; }
};

/// `domain` lists A inside `space` and h[i] the image of domain[i]; h must
/// preserve distances on A. Picks the least s ∈ S with s ≥ 3 and
/// δ′·(s−2) ≥ Δ.
RohlinResult rohlin_approximation(const FiniteMetricSpace& space, const std::vector<std::size_t>& domain,
                                  const std::vector<std::size_t>& h, const Rational& epsilon, const PeriodSet& periods);

}  // namespace urysohn
