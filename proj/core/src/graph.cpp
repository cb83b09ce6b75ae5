#include "urysohn/graph.hpp"

#include <queue>

#include "urysohn/error.hpp"

namespace urysohn {

namespace {

void check_edges(const WeightedGraph& g) {
  for (const auto& e : g.edges) {
    if (e.u >= g.size() || e.v >= g.size()) fail_precondition("edge endpoint out of range");
    if (e.weight.sign() < 0) fail_precondition("negative edge weight " + e.weight.str());
  }
}

void relax(std::optional<Rational>& slot, const Rational& candidate) {
  if (!slot || candidate < *slot) slot = candidate;
}

}  // namespace

DistanceMatrix all_pairs_shortest_paths(const WeightedGraph& g) {
  check_edges(g);
  const std::size_t n = g.size();
  DistanceMatrix d(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = Rational(0);
  for (const auto& e : g.edges) {
    relax(d[e.u][e.v], e.weight);
    relax(d[e.v][e.u], e.weight);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!d[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!d[k][j]) continue;
        relax(d[i][j], *d[i][k] + *d[k][j]);
      }
    }
  }
  return d;
}

std::vector<std::optional<Rational>> single_source_shortest_paths(const WeightedGraph& g,
                                                                  std::size_t source) {
  check_edges(g);
  if (source >= g.size()) fail_precondition("source vertex out of range");
  std::vector<std::vector<std::pair<std::size_t, const Rational*>>> adj(g.size());
  for (const auto& e : g.edges) {
    adj[e.u].emplace_back(e.v, &e.weight);
    adj[e.v].emplace_back(e.u, &e.weight);
  }
  std::vector<std::optional<Rational>> dist(g.size());
  std::vector<bool> done(g.size(), false);
  using Item = std::pair<Rational, std::size_t>;
  auto later = [](const Item& a, const Item& b) { return b.first < a.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> queue(later);
  dist[source] = Rational(0);
  queue.emplace(Rational(0), source);
  while (!queue.empty()) {
    auto [du, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    for (const auto& [v, w] : adj[u]) {
      Rational cand = du + *w;
      if (!dist[v] || cand < *dist[v]) {
        dist[v] = cand;
        queue.emplace(std::move(cand), v);
      }
    }
  }
  return dist;
}

}  // namespace urysohn
