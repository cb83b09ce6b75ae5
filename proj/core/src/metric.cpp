#include "urysohn/metric.hpp"

#include <algorithm>

namespace urysohn {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> points, std::vector<std::vector<Rational>> dist)
    : points_(std::move(points)), dist_(std::move(dist)) {
  if (dist_.size() != points_.size()) fail_precondition("distance matrix has the wrong number of rows");
  for (const auto& row : dist_) {
    if (row.size() != points_.size()) fail_precondition("distance matrix is not square");
  }
  index_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].empty()) fail_precondition("point labels must be non-empty");
    if (!index_.emplace(points_[i], i).second) fail_precondition("duplicate point label '" + points_[i] + "'");
  }
}

std::optional<std::size_t> FiniteMetricSpace::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteMetricSpace::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) fail_parse("unknown point '" + label + "'");
  return *i;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(const std::vector<std::size_t>& subset) const {
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> dist(subset.size(), std::vector<Rational>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    labels.push_back(points_.at(subset[i]));
    for (std::size_t j = 0; j < subset.size(); ++j) dist[i][j] = dist_[subset[i]][subset[j]];
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

Rational FiniteMetricSpace::diameter() const {
  Rational best(0);
  for (const auto& row : dist_) {
    for (const auto& x : row) best = max(best, x);
  }
  return best;
}

std::optional<MetricViolation> verify_metric(const FiniteMetricSpace& space) {
  using Axiom = MetricViolation::Axiom;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!space.d(i, i).is_zero()) {
      return MetricViolation{Axiom::zero_diagonal, {space.label(i)},
                             "d(" + space.label(i) + "," + space.label(i) + ") = " + space.d(i, i).str()};
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (space.d(i, j) != space.d(j, i)) {
        return MetricViolation{Axiom::symmetry, {space.label(i), space.label(j)},
                               "d(" + space.label(i) + "," + space.label(j) + ") = " + space.d(i, j).str() +
                                   " but d(" + space.label(j) + "," + space.label(i) + ") = " + space.d(j, i).str()};
      }
      if (space.d(i, j).sign() <= 0) {
        return MetricViolation{Axiom::positivity, {space.label(i), space.label(j)},
                               "d(" + space.label(i) + "," + space.label(j) + ") = " + space.d(i, j).str()};
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = x + 1; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        if (space.d(x, z) > space.d(x, y) + space.d(y, z)) {
          return MetricViolation{Axiom::triangle, {space.label(x), space.label(z), space.label(y)},
                                 "d(" + space.label(x) + "," + space.label(z) + ") = " + space.d(x, z).str() +
                                     " exceeds the route through " + space.label(y)};
        }
      }
    }
  }
  return std::nullopt;
}

IsometricEmbedding::IsometricEmbedding(FiniteMetricSpace source_, FiniteMetricSpace target_,
                                       std::vector<std::size_t> map_)
    : source(std::move(source_)), target(std::move(target_)), map(std::move(map_)) {
  if (map.size() != source.size()) fail_precondition("embedding must map every source point");
  std::vector<bool> used(target.size(), false);
  for (std::size_t x : map) {
    if (x >= target.size() || used[x]) fail_precondition("embedding is not injective");
    used[x] = true;
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = 0; j < map.size(); ++j) {
      if (target.d(map[i], map[j]) != source.d(i, j)) {
        fail_precondition("embedding changes the distance between '" + source.label(i) + "' and '" +
                          source.label(j) + "'");
      }
    }
  }
}

IsometricEmbedding IsometricEmbedding::by_label(FiniteMetricSpace source, FiniteMetricSpace target) {
  std::vector<std::size_t> map;
  for (const auto& p : source.points()) {
    auto i = target.find(p);
    if (!i) fail_precondition("point '" + p + "' of the subspace is missing from the superspace");
    map.push_back(*i);
  }
  return IsometricEmbedding(std::move(source), std::move(target), std::move(map));
}

Isometry::Isometry(FiniteMetricSpace space_, Permutation perm_) : space(std::move(space_)), perm(std::move(perm_)) {
  if (perm.size() != space.size()) fail_precondition("isometry size does not match its space");
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      if (space.d(perm(i), perm(j)) != space.d(i, j)) {
        fail_precondition("map changes the distance between '" + space.label(i) + "' and '" + space.label(j) + "'");
      }
    }
  }
}

Isometry Isometry::identity(FiniteMetricSpace space) {
  auto n = space.size();
  return Isometry(std::move(space), Permutation::identity(n));
}

Isometry power(const Isometry& g, std::int64_t k) { return Isometry(g.space, permutation_power(g.perm, k)); }

Isometry compose(const Isometry& outer, const Isometry& inner) {
  if (!(outer.space == inner.space)) fail_precondition("composing isometries of different spaces");
  return Isometry(outer.space, compose(outer.perm, inner.perm));
}

PartialIsometry::PartialIsometry(FiniteMetricSpace ambient_, std::vector<std::size_t> source_,
                                 std::vector<std::size_t> target_)
    : ambient(std::move(ambient_)), source(std::move(source_)), target(std::move(target_)) {
  if (source.size() != target.size()) fail_precondition("partial isometry needs matching domain and range");
  for (auto side : {&source, &target}) {
    std::vector<bool> used(ambient.size(), false);
    for (std::size_t x : *side) {
      if (x >= ambient.size() || used[x]) fail_precondition("partial isometry is not injective");
      used[x] = true;
    }
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = i + 1; j < source.size(); ++j) {
      if (ambient.d(target[i], target[j]) != ambient.d(source[i], source[j])) {
        fail_precondition("partial map is not distance preserving");
      }
    }
  }
}

MetricAmalgam free_amalgam_metric(const FiniteMetricSpace& base, const std::vector<IsometricEmbedding>& parts) {
  if (parts.empty()) fail_precondition("free amalgam needs at least one part");
  if (base.empty()) fail_precondition("free amalgam over an empty base is undefined");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].source == base)) {
      fail_precondition("part " + std::to_string(i + 1) + " does not embed the given base");
    }
  }
  const std::size_t n = parts.size();
  const std::size_t m = base.size();

  MetricAmalgam out;
  out.base = base;
  out.parts = parts;
  out.base_map.resize(m);

  // Universe: base points first, then the new points of each part in order.
  std::vector<std::string> labels = base.points();
  struct Origin {
    std::size_t part;   // n for base points
    std::size_t point;  // index in the part (or in the base)
  };
  std::vector<Origin> origin;
  for (std::size_t x = 0; x < m; ++x) {
    origin.push_back({n, x});
    out.base_map[x] = x;
  }
  out.embeddings.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& part = parts[i];
    std::vector<std::size_t> base_of(part.target.size(), m);
    for (std::size_t x = 0; x < m; ++x) base_of[part.map[x]] = x;
    out.embeddings[i].resize(part.target.size());
    for (std::size_t y = 0; y < part.target.size(); ++y) {
      if (base_of[y] < m) {
        out.embeddings[i][y] = base_of[y];
        continue;
      }
      out.embeddings[i][y] = labels.size();
      labels.push_back(part.target.label(y) + "@" + std::to_string(i + 1));
      origin.push_back({i, y});
    }
  }

  const std::size_t total = labels.size();
  std::vector<std::vector<Rational>> dist(total, std::vector<Rational>(total));
  for (std::size_t u = 0; u < total; ++u) {
    for (std::size_t v = u + 1; v < total; ++v) {
      const Origin a = origin[u];
      const Origin b = origin[v];
      Rational d;
      if (a.part == n && b.part == n) {
        d = base.d(a.point, b.point);
      } else if (a.part == n) {
        d = parts[b.part].target.d(parts[b.part].map[a.point], b.point);
      } else if (a.part == b.part) {
        d = parts[a.part].target.d(a.point, b.point);
      } else {
        const auto& pi = parts[a.part];
        const auto& pj = parts[b.part];
        std::optional<Rational> best;
        for (std::size_t z = 0; z < m; ++z) {
          Rational via = pi.target.d(a.point, pi.map[z]) + pj.target.d(pj.map[z], b.point);
          if (!best || via < *best) best = std::move(via);
        }
        d = *best;
      }
      dist[u][v] = d;
      dist[v][u] = std::move(d);
    }
  }
  out.result = FiniteMetricSpace(std::move(labels), std::move(dist));
  return out;
}

void check_katetov(const FiniteMetricSpace& space, const std::vector<Rational>& r) {
  if (r.size() != space.size()) fail_precondition("need one prescribed distance per existing point");
  for (std::size_t a = 0; a < r.size(); ++a) {
    if (r[a].sign() <= 0) {
      throw KatetovError(space.label(a), space.label(a),
                         "distance to '" + space.label(a) + "' must be positive, got " + r[a].str());
    }
  }
  for (std::size_t a = 0; a < r.size(); ++a) {
    for (std::size_t b = a + 1; b < r.size(); ++b) {
      const Rational& dab = space.d(a, b);
      if ((r[a] - r[b]).abs() > dab || dab > r[a] + r[b]) {
        throw KatetovError(space.label(a), space.label(b),
                           "prescribed distances " + r[a].str() + " and " + r[b].str() + " to '" +
                               space.label(a) + "' and '" + space.label(b) + "' are incompatible with d = " +
                               dab.str());
      }
    }
  }
}

FiniteMetricSpace one_point_extension(const FiniteMetricSpace& space, const std::string& new_label,
                                      const std::vector<Rational>& distances) {
  if (space.find(new_label)) fail_precondition("label '" + new_label + "' already in use");
  check_katetov(space, distances);
  const std::size_t n = space.size();
  auto labels = space.points();
  labels.push_back(new_label);
  auto dist = space.dist();
  for (std::size_t i = 0; i < n; ++i) dist[i].push_back(distances[i]);
  dist.emplace_back(distances);
  dist.back().push_back(Rational(0));
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace one_point_extension(const FiniteMetricSpace& space, const std::string& new_label,
                                      const std::map<std::string, Rational>& distances) {
  std::vector<Rational> r(space.size());
  std::vector<bool> given(space.size(), false);
  for (const auto& [label, value] : distances) {
    const auto i = space.find(label);
    if (!i) fail_precondition("distance given for unknown point '" + label + "'");
    r[*i] = value;
    given[*i] = true;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!given[i]) fail_precondition("no distance given for point '" + space.label(i) + "'");
  }
  return one_point_extension(space, new_label, r);
}

OrbitExtension orbit_closure_extension(const Isometry& k, const std::string& new_label,
                                       const std::vector<Rational>& distances) {
  const auto& C = k.space;
  if (C.empty()) fail_precondition("orbit closure needs a non-empty space");
  check_katetov(C, distances);
  const std::size_t n = C.size();
  const Permutation k_inv = k.perm.inverse();

  // profiles[j][c] = d(a_j, c) = r(k^{-j} c); stop at the first repeat of profile 0.
  std::vector<std::vector<Rational>> profiles{distances};
  while (true) {
    std::vector<Rational> next(n);
    for (std::size_t c = 0; c < n; ++c) next[c] = profiles.back()[k_inv(c)];
    if (next == profiles.front()) break;
    profiles.push_back(std::move(next));
  }
  const std::size_t p = profiles.size();

  auto labels = C.points();
  for (std::size_t j = 0; j < p; ++j) {
    std::string label = j == 0 ? new_label : new_label + "~" + std::to_string(j);
    if (C.find(label)) fail_precondition("label '" + label + "' already in use");
    labels.push_back(std::move(label));
  }
  std::vector<std::vector<Rational>> dist(n + p, std::vector<Rational>(n + p));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) dist[x][y] = C.d(x, y);
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t c = 0; c < n; ++c) {
      dist[n + j][c] = profiles[j][c];
      dist[c][n + j] = profiles[j][c];
    }
    for (std::size_t i = 0; i < j; ++i) {
      Rational best = profiles[i][0] + profiles[j][0];
      for (std::size_t c = 1; c < n; ++c) best = min(best, profiles[i][c] + profiles[j][c]);
      dist[n + i][n + j] = best;
      dist[n + j][n + i] = std::move(best);
    }
  }

  std::vector<std::size_t> image(n + p);
  for (std::size_t c = 0; c < n; ++c) image[c] = k.perm(c);
  for (std::size_t j = 0; j < p; ++j) image[n + j] = n + (j + 1) % p;

  FiniteMetricSpace D(std::move(labels), std::move(dist));
  return OrbitExtension{Isometry(std::move(D), Permutation(std::move(image))), p};
}

}  // namespace urysohn
