#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/rational.hpp"

namespace urysohn {

struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  Rational weight;
};

/// Undirected graph with non-negative rational edge weights.
struct WeightedGraph {
  std::vector<std::string> vertices;
  std::vector<WeightedEdge> edges;

  std::size_t size() const noexcept { return vertices.size(); }
  void add_edge(std::size_t u, std::size_t v, Rational w) { edges.push_back({u, v, std::move(w)}); }
};

/// nullopt marks an unreachable pair.
using DistanceMatrix = std::vector<std::vector<std::optional<Rational>>>;

/// Exact shortest-path distances by relaxation over every intermediate
/// vertex (Floyd–Warshall). Rejects negative weights.
DistanceMatrix all_pairs_shortest_paths(const WeightedGraph& g);

/// Exact single-source shortest paths (Dijkstra). Same contract as one row
/// of all_pairs_shortest_paths; used where an independent route is wanted.
std::vector<std::optional<Rational>> single_source_shortest_paths(const WeightedGraph& g,
                                                                  std::size_t source);

}  // namespace urysohn
