#pragma once

// Brute-force references for temporal reachability, cliques and
// connectivity on small graphs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tvg/tgraph.hpp"

namespace oracle {

using BoolMatrix = std::vector<std::vector<char>>;

// Reflexive transitive closure of one slot (Floyd-Warshall) over ids 0..n-1.
// Absent nodes have an all-zero row and column.
inline BoolMatrix slot_closure(const tvg::Graphlet& g, std::size_t n) {
  BoolMatrix c(n, std::vector<char>(n, 0));
  for (const auto id : g.nodes()) c[id][id] = 1;
  for (const auto& e : g.edges()) c[e.u][e.v] = c[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (c[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (c[k][j]) c[i][j] = 1;
  return c;
}

// T-reachability as a boolean matrix product of per-slot closures. The
// vector `held` is the set of nodes holding a copy; it starts when the
// source first appears and is filtered through each slot's closure.
inline bool product_reachable(const tvg::Tgs& tgs, tvg::NodeId u, tvg::NodeId v) {
  if (u == v) return true;
  const std::size_t n = tgs.node_universe().back() + 1;
  std::vector<char> held(n, 0);
  bool started = false;
  for (const auto& g : tgs.graphlets()) {
    const auto c = slot_closure(g, n);
    if (!started && g.has_node(u)) {
      started = true;
      held[u] = 1;
    }
    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (held[i])
        for (std::size_t j = 0; j < n; ++j)
          if (c[i][j]) next[j] = 1;
    held = std::move(next);
    if (held[v]) return true;
  }
  return false;
}

// Depth-first enumeration of node-simple journeys, each hop taken in the
// earliest slot >= the current one in which the edge exists (uniform node sets).
inline bool journey_search(const tvg::Tgs& tgs, tvg::NodeId u, tvg::NodeId v) {
  if (u == v) return true;
  const std::size_t n = tgs.node_universe().back() + 1;
  std::vector<char> on_path(n, 0);
  std::function<bool(tvg::NodeId, int)> dfs = [&](tvg::NodeId x, int t) {
    if (x == v) return true;
    on_path[x] = 1;
    for (tvg::NodeId y = 0; y < n; ++y) {
      if (on_path[y]) continue;
      for (int s = t; s <= tgs.horizon(); ++s) {
        if (tgs.at(s).has_edge(x, y)) {
          if (dfs(y, s)) {
            on_path[x] = 0;
            return true;
          }
          break;
        }
      }
    }
    on_path[x] = 0;
    return false;
  };
  return dfs(u, 1);
}

// Every node present in every slot; each slot edge present with probability density.
inline tvg::Tgs random_uniform_tgs(std::mt19937_64& rng, tvg::NodeId n, int horizon, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<std::vector<tvg::Edge>> slots(static_cast<std::size_t>(horizon));
  for (auto& es : slots)
    for (tvg::NodeId a = 0; a < n; ++a)
      for (tvg::NodeId b = a + 1; b < n; ++b)
        if (coin(rng)) es.push_back({a, b});
  return tvg::Tgs::uniform(n, slots);
}

// Random node presence per slot as well as random edges among present nodes.
inline tvg::Tgs random_gappy_tgs(std::mt19937_64& rng, tvg::NodeId n, int horizon, double density) {
  std::bernoulli_distribution coin(density);
  std::bernoulli_distribution here(0.8);
  std::vector<tvg::Graphlet> gs;
  for (int t = 1; t <= horizon; ++t) {
    std::vector<tvg::NodeId> nodes;
    for (tvg::NodeId a = 0; a < n; ++a)
      if (here(rng) || (t == 1 && a == 0)) nodes.push_back(a);
    std::vector<tvg::Edge> es;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (coin(rng)) es.push_back({nodes[i], nodes[j]});
    gs.emplace_back(t, nodes, es);
  }
  return tvg::Tgs(std::move(gs));
}

// Size of a maximum clique of an undirected graph by subset enumeration.
inline std::size_t max_clique_size(const std::vector<tvg::NodeId>& nodes, const std::vector<tvg::Edge>& edges) {
  const std::size_t n = nodes.size();
  auto adjacent = [&](std::size_t i, std::size_t j) {
    return std::binary_search(edges.begin(), edges.end(), tvg::make_edge(nodes[i], nodes[j]));
  };
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u) && !adjacent(i, j)) ok = false;
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

// Connectivity of an undirected graph after deleting the vertices in `removed`.
inline bool connected_without(const std::vector<std::vector<std::size_t>>& adj, const std::vector<char>& removed) {
  const std::size_t n = adj.size();
  std::size_t start = n;
  std::size_t alive = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) {
      ++alive;
      if (start == n) start = i;
    }
  if (alive == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    ++count;
    for (const auto y : adj[x])
      if (!removed[y] && !seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  return count == alive;
}

}  // namespace oracle
