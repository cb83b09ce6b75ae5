#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/permutation.hpp"
#include "urysohn/rational.hpp"

namespace urysohn {

/// Labelled points with a rational distance matrix. The constructor checks
/// shape and label uniqueness only; metric axioms are verify_metric's job.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> points, std::vector<std::vector<Rational>> dist);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::string& label(std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<Rational>>& dist() const noexcept { return dist_; }
  const Rational& d(std::size_t i, std::size_t j) const { return dist_[i][j]; }

  std::optional<std::size_t> find(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;

  /// Subspace on the given points, in the given order.
  FiniteMetricSpace restrict_to(const std::vector<std::size_t>& subset) const;
  Rational diameter() const;

  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.points_ == b.points_ && a.dist_ == b.dist_;
  }

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<Rational>> dist_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct MetricViolation {
  enum class Axiom { zero_diagonal, symmetry, positivity, triangle };
  Axiom axiom;
  /// Witnessing labels. For a triangle violation (x, z, y): d(x,z) > d(x,y) + d(y,z).
  std::vector<std::string> witness;
  std::string message;
};

/// First violated axiom in scan order, or nullopt when the space is a metric.
std::optional<MetricViolation> verify_metric(const FiniteMetricSpace& space);

/// Distance-preserving injection source → target.
struct IsometricEmbedding {
  FiniteMetricSpace source;
  FiniteMetricSpace target;
  std::vector<std::size_t> map;

  IsometricEmbedding() = default;
  IsometricEmbedding(FiniteMetricSpace source, FiniteMetricSpace target, std::vector<std::size_t> map);

  /// Embeds every source point at the target point with the same label.
  static IsometricEmbedding by_label(FiniteMetricSpace source, FiniteMetricSpace target);
};

struct Isometry {
  FiniteMetricSpace space;
  Permutation perm;

  Isometry() = default;
  Isometry(FiniteMetricSpace space, Permutation perm);

  static Isometry identity(FiniteMetricSpace space);
};

Isometry power(const Isometry& g, std::int64_t k);
Isometry compose(const Isometry& outer, const Isometry& inner);

/// Distance-preserving bijection source[i] ↦ target[i] inside `ambient`.
struct PartialIsometry {
  FiniteMetricSpace ambient;
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;

  PartialIsometry() = default;
  PartialIsometry(FiniteMetricSpace ambient, std::vector<std::size_t> source, std::vector<std::size_t> target);
};

/// Free amalgam of parts ιᵢ: base → Bᵢ. Base points keep their labels; the
/// remaining points of part i are labelled "<label>@i" (1-based).
struct MetricAmalgam {
  FiniteMetricSpace base;
  std::vector<IsometricEmbedding> parts;
  FiniteMetricSpace result;
  std::vector<std::size_t> base_map;               // base point -> result point
  std::vector<std::vector<std::size_t>> embeddings;  // πᵢ: part point -> result point
};

MetricAmalgam free_amalgam_metric(const FiniteMetricSpace& base, const std::vector<IsometricEmbedding>& parts);

/// Raised when prescribed distances cannot be realized by a new point.
class KatetovError : public Error {
 public:
  KatetovError(std::string a, std::string b, const std::string& what)
      : Error(ErrorKind::precondition, what), a_(std::move(a)), b_(std::move(b)) {}
  const std::string& first() const noexcept { return a_; }
  const std::string& second() const noexcept { return b_; }

 private:
  std::string a_;
  std::string b_;
};

/// Checks |r_a − r_b| ≤ d(a,b) ≤ r_a + r_b and r_a > 0; throws KatetovError.
void check_katetov(const FiniteMetricSpace& space, const std::vector<Rational>& distances);

/// `distances[i]` is the distance from the new point to point i.
FiniteMetricSpace one_point_extension(const FiniteMetricSpace& space, const std::string& new_label,
                                      const std::vector<Rational>& distances);
FiniteMetricSpace one_point_extension(const FiniteMetricSpace& space, const std::string& new_label,
                                      const std::map<std::string, Rational>& distances);

struct OrbitExtension {
  Isometry extended;        // k′ on the enlarged space
  std::size_t orbit_size;   // number of points added
};

/// Adds the k-orbit of a new point with distance profile `distances`.
/// Points whose profiles coincide are the same point, so the orbit has as
/// many points as the profile's period under k. Added points are labelled
/// new_label, new_label~1, new_label~2, ...
OrbitExtension orbit_closure_extension(const Isometry& k, const std::string& new_label,
                                       const std::vector<Rational>& distances);

}  // namespace urysohn
