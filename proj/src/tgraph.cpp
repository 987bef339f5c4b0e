#include "tvg/tgraph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "tvg/detail/disjoint_sets.hpp"

namespace tvg {

Edge make_edge(NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

Graphlet::Graphlet(int time, std::vector<NodeId> nodes, std::vector<Edge> edges)
    : time_(time), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (time_ < 1) throw std::invalid_argument("graphlet time must be >= 1");
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  for (auto& e : edges_) {
    e = make_edge(e.u, e.v);
    if (!has_node(e.u) || !has_node(e.v)) {
      throw std::invalid_argument("edge endpoint not in graphlet at slot " + std::to_string(time_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge at slot " + std::to_string(time_));
  }
}

bool Graphlet::has_node(NodeId id) const noexcept {
  return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

bool Graphlet::has_edge(NodeId a, NodeId b) const noexcept {
  if (a == b) return false;
  const Edge e = a < b ? Edge{a, b} : Edge{b, a};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

TemporalGraphletSequence::TemporalGraphletSequence(std::vector<Graphlet> graphlets)
    : graphlets_(std::move(graphlets)) {
  if (graphlets_.empty()) throw std::invalid_argument("a graphlet sequence needs at least one slot");
  for (std::size_t i = 0; i < graphlets_.size(); ++i) {
    if (graphlets_[i].time() != static_cast<int>(i) + 1) {
      throw std::invalid_argument("graphlet times must be 1, 2, ..., T");
    }
    const auto ns = graphlets_[i].nodes();
    universe_.insert(universe_.end(), ns.begin(), ns.end());
  }
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
}

TemporalGraphletSequence TemporalGraphletSequence::uniform(NodeId n,
                                                           const std::vector<std::vector<Edge>>& edges) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  std::vector<Graphlet> gs;
  gs.reserve(edges.size());
  for (std::size_t t = 0; t < edges.size(); ++t) {
    gs.emplace_back(static_cast<int>(t) + 1, nodes, edges[t]);
  }
  return TemporalGraphletSequence(std::move(gs));
}

const Graphlet& TemporalGraphletSequence::at(int slot) const {
  if (slot < 1 || slot > horizon()) throw std::out_of_range("slot " + std::to_string(slot));
  return graphlets_[static_cast<std::size_t>(slot - 1)];
}

bool TemporalGraphletSequence::contains(NodeId id) const noexcept {
  return std::binary_search(universe_.begin(), universe_.end(), id);
}

namespace {

bool by_time_then_id(const StackedVertex& a, const StackedVertex& b) {
  return a.time != b.time ? a.time < b.time : a.id < b.id;
}

// Dense index of a node id in the universe.
std::size_t dense(const Tgs& tgs, NodeId id) {
  const auto u = tgs.node_universe();
  const auto it = std::lower_bound(u.begin(), u.end(), id);
  if (it == u.end() || *it != id) throw std::out_of_range("unknown node id " + std::to_string(id));
  return static_cast<std::size_t>(it - u.begin());
}

// Per-slot components over dense node indices, ignoring removed nodes.
// Nodes absent from a slot get the sentinel root n.
std::vector<std::vector<std::size_t>> slot_components(const Tgs& tgs, const std::vector<char>& removed) {
  const std::size_t n = tgs.node_universe().size();
  std::vector<std::vector<std::size_t>> comps;
  comps.reserve(static_cast<std::size_t>(tgs.horizon()));
  for (const auto& g : tgs.graphlets()) {
    detail::DisjointSets ds(n);
    for (const auto& e : g.edges()) {
      const auto a = dense(tgs, e.u);
      const auto b = dense(tgs, e.v);
      if (!removed[a] && !removed[b]) ds.unite(a, b);
    }
    std::vector<std::size_t> root(n, n);
    for (const auto id : g.nodes()) {
      const auto i = dense(tgs, id);
      if (!removed[i]) root[i] = ds.find(i);
    }
    comps.push_back(std::move(root));
  }
  return comps;
}

// Nodes T-reachable from `source`. A copy survives into the next slot only
// at nodes present in both; within a slot it spreads over its component.
std::vector<char> propagate(const std::vector<std::vector<std::size_t>>& comps, std::size_t source,
                            std::size_t n) {
  std::vector<char> reached(n, 0);
  std::vector<char> holding(n, 0);
  std::vector<char> hot(n + 1);
  bool started = false;
  for (const auto& root : comps) {
    if (!started && root[source] != n) {
      started = true;
      holding[source] = 1;
      reached[source] = 1;
    }
    std::fill(hot.begin(), hot.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (holding[i] && root[i] != n) hot[root[i]] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      holding[i] = root[i] != n && hot[root[i]];
      if (holding[i]) reached[i] = 1;
    }
  }
  return reached;
}

}  // namespace

StackedGraph::StackedGraph(std::vector<StackedVertex> vertices, std::vector<StackedArc> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
  if (!std::is_sorted(vertices_.begin(), vertices_.end(), by_time_then_id)) {
    throw std::invalid_argument("stacked vertices must be ordered by (time, id)");
  }
  offsets_.assign(vertices_.size() + 1, 0);
  for (const auto& a : arcs_) {
    if (a.from >= vertices_.size() || a.to >= vertices_.size()) throw std::out_of_range("arc endpoint");
    ++offsets_[a.from + 1];
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) offsets_[i + 1] += offsets_[i];
  targets_.resize(arcs_.size());
  auto fill = offsets_;
  for (const auto& a : arcs_) targets_[fill[a.from]++] = a.to;
}

std::optional<std::size_t> StackedGraph::index_of(NodeId id, int time) const {
  const StackedVertex key{id, time};
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), key, by_time_then_id);
  if (it == vertices_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::span<const std::size_t> StackedGraph::successors(std::size_t v) const {
  return std::span<const std::size_t>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::size_t StackedGraph::cross_arc_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(arcs_.begin(), arcs_.end(), [](const StackedArc& a) { return a.cross; }));
}

bool StackedGraph::reaches(std::size_t from, std::size_t to) const {
  std::vector<char> seen(vertices_.size(), 0);
  std::queue<std::size_t> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    const auto x = q.front();
    q.pop();
    if (x == to) return true;
    for (const auto y : successors(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        q.push(y);
      }
    }
  }
  return false;
}

StackedGraph build_stacked(const Tgs& tgs) {
  std::vector<StackedVertex> vs;
  for (const auto& g : tgs.graphlets()) {
    for (const auto id : g.nodes()) vs.push_back({id, g.time()});
  }
  auto index = [&](NodeId id, int t) {
    const StackedVertex key{id, t};
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), key, by_time_then_id) - vs.begin());
  };
  std::vector<StackedArc> arcs;
  for (const auto& g : tgs.graphlets()) {
    for (const auto& e : g.edges()) {
      const auto a = index(e.u, g.time());
      const auto b = index(e.v, g.time());
      arcs.push_back({a, b, false});
      arcs.push_back({b, a, false});
    }
    if (g.time() < tgs.horizon()) {
      const auto& next = tgs.at(g.time() + 1);
      for (const auto id : g.nodes()) {
        if (next.has_node(id)) arcs.push_back({index(id, g.time()), index(id, g.time() + 1), true});
      }
    }
  }
  return StackedGraph(std::move(vs), std::move(arcs));
}

SmashedGraph smash(const Tgs& tgs) {
  SmashedGraph out;
  const auto u = tgs.node_universe();
  out.nodes.assign(u.begin(), u.end());
  for (const auto& g : tgs.graphlets()) {
    out.edges.insert(out.edges.end(), g.edges().begin(), g.edges().end());
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

Tgs m_smash(const Tgs& tgs, int m) {
  if (m < 1) throw std::invalid_argument("smash granularity m must be >= 1");
  std::vector<Graphlet> blocks;
  const int T = tgs.horizon();
  for (int start = 1, block = 1; start <= T; start += m, ++block) {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    for (int t = start; t <= std::min(T, start + m - 1); ++t) {
      const auto& g = tgs.at(t);
      nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
      edges.insert(edges.end(), g.edges().begin(), g.edges().end());
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    blocks.emplace_back(block, std::move(nodes), std::move(edges));
  }
  return Tgs(std::move(blocks));
}

bool t_adjacent(const Tgs& tgs, NodeId u, NodeId v) {
  dense(tgs, u);
  dense(tgs, v);
  return std::any_of(tgs.graphlets().begin(), tgs.graphlets().end(),
                     [&](const Graphlet& g) { return g.has_edge(u, v); });
}

Reachability t_reachable(const Tgs& tgs, NodeId u, NodeId v) {
  const auto src = dense(tgs, u);
  const auto dst = dense(tgs, v);
  if (src == dst) return {true, {}};

  // Earliest-arrival journey search; a node reached in slot t may forward
  // along any slot-t edge, so several hops can share a slot. A held copy
  // is kept into the next slot only when its node is present there.
  const std::size_t n = tgs.node_universe().size();
  constexpr int kNever = std::numeric_limits<int>::max();
  std::vector<int> arrival(n, kNever);
  std::vector<JourneyHop> via(n);
  std::vector<char> holding(n, 0);
  for (const auto& g : tgs.graphlets()) {
    std::vector<char> present(n, 0);
    for (const auto id : g.nodes()) present[dense(tgs, id)] = 1;
    if (arrival[src] == kNever && present[src]) {
      arrival[src] = 0;
      holding[src] = 1;
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : g.edges()) {
      const auto a = dense(tgs, e.u);
      const auto b = dense(tgs, e.v);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::queue<std::size_t> q;
    for (std::size_t i = 0; i < n; ++i) {
      holding[i] = holding[i] && present[i];
      if (holding[i]) q.push(i);
    }
    while (!q.empty()) {
      const auto x = q.front();
      q.pop();
      for (const auto y : adj[x]) {
        if (holding[y]) continue;
        holding[y] = 1;
        if (arrival[y] == kNever) {
          arrival[y] = g.time();
          via[y] = {tgs.node_universe()[x], tgs.node_universe()[y], g.time()};
        }
        q.push(y);
      }
    }
    if (arrival[dst] != kNever) break;
  }
  if (arrival[dst] == kNever) return {false, {}};

  Reachability r{true, {}};
  for (auto cur = dst; cur != src; cur = dense(tgs, via[cur].from)) r.journey.push_back(via[cur]);
  std::reverse(r.journey.begin(), r.journey.end());
  return r;
}

bool stacked_reachable(const StackedGraph& stg, NodeId u, NodeId v) {
  const auto verts = stg.vertices();
  const auto from = std::find_if(verts.begin(), verts.end(), [&](const StackedVertex& x) { return x.id == u; });
  const bool has_v = std::any_of(verts.begin(), verts.end(), [&](const StackedVertex& x) { return x.id == v; });
  if (from == verts.end() || !has_v) throw std::out_of_range("node absent from stacked graph");
  if (u == v) return true;
  std::vector<char> seen(verts.size(), 0);
  std::vector<std::size_t> stack{static_cast<std::size_t>(from - verts.begin())};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    if (verts[x].id == v) return true;
    for (const auto y : stg.successors(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return false;
}

std::vector<NodeId> t_clique(const Tgs& tgs) {
  const auto first = tgs.at(1).nodes();
  const std::vector<NodeId> cand(first.begin(), first.end());
  const std::size_t n = cand.size();
  if (n == 0) return {};
  const auto smg = smash(tgs);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool a = std::binary_search(smg.edges.begin(), smg.edges.end(), Edge{cand[i], cand[j]});
      adj[i][j] = adj[j][i] = a;
    }
  }

  // Bron-Kerbosch without pivoting, visiting candidates in id order.
  std::vector<std::size_t> best;
  std::vector<std::size_t> current;
  auto better = [&](const std::vector<std::size_t>& c) {
    if (c.size() != best.size()) return c.size() > best.size();
    return std::lexicographical_compare(c.begin(), c.end(), best.begin(), best.end());
  };
  auto expand = [&](auto&& self, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
    if (p.empty() && x.empty()) {
      auto c = current;
      std::sort(c.begin(), c.end());
      if (better(c)) best = std::move(c);
      return;
    }
    if (current.size() + p.size() < best.size()) return;
    while (!p.empty()) {
      const auto v = p.front();
      std::vector<std::size_t> np, nx;
      for (const auto w : p) {
        if (adj[v][w]) np.push_back(w);
      }
      for (const auto w : x) {
        if (adj[v][w]) nx.push_back(w);
      }
      current.push_back(v);
      self(self, std::move(np), std::move(nx));
      current.pop_back();
      p.erase(p.begin());
      x.push_back(v);
    }
  };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  expand(expand, all, {});

  std::vector<NodeId> out;
  for (const auto i : best) out.push_back(cand[i]);
  return out;
}

bool t_k_connected(const Tgs& tgs, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::size_t n = tgs.node_universe().size();
  const auto removals = static_cast<std::size_t>(k - 1);
  if (removals >= n) throw std::invalid_argument("k - 1 must be smaller than the number of nodes");

  std::vector<std::size_t> pick(removals);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    std::vector<char> removed(n, 0);
    for (const auto i : pick) removed[i] = 1;
    const auto comps = slot_components(tgs, removed);
    for (std::size_t s = 0; s < n; ++s) {
      if (removed[s]) continue;
      const auto r = propagate(comps, s, n);
      for (std::size_t d = 0; d < n; ++d) {
        if (!removed[d] && !r[d]) return false;
      }
    }
    // Next combination in lexicographic order.
    std::size_t i = removals;
    while (i > 0 && pick[i - 1] == n - removals + i - 1) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < removals; ++j) pick[j] = pick[j - 1] + 1;
  }
}

double reachable_pairs_fraction(const Tgs& tgs) {
  const std::size_t n = tgs.node_universe().size();
  if (n < 2) return 0.0;
  const auto comps = slot_components(tgs, std::vector<char>(n, 0));
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto r = propagate(comps, s, n);
    count += static_cast<std::size_t>(std::count(r.begin(), r.end(), 1)) - 1;
  }
  return static_cast<double>(count) / static_cast<double>(n * (n - 1));
}

double connected_pairs_fraction(const SmashedGraph& smg) {
  const std::size_t n = smg.nodes.size();
  if (n < 2) return 0.0;
  detail::DisjointSets ds(n);
  auto idx = [&](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(smg.nodes.begin(), smg.nodes.end(), id) - smg.nodes.begin());
  };
  for (const auto& e : smg.edges) ds.unite(idx(e.u), idx(e.v));
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += ds.size_of(i) - 1;
  return static_cast<double>(count) / static_cast<double>(n * (n - 1));
}

bool stacked_k_connected(const StackedGraph& stg, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::size_t n = stg.vertices().size();
  const auto removals = static_cast<std::size_t>(k - 1);
  if (n <= removals + 1) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& a : stg.arcs()) {
    adj[a.from].push_back(a.to);
    adj[a.to].push_back(a.from);
  }
  std::vector<std::size_t> pick(removals);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    std::vector<char> seen(n, 0);
    for (const auto i : pick) seen[i] = 1;
    std::size_t start = 0;
    while (seen[start]) ++start;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    std::size_t visited = removals + 1;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (const auto y : adj[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          ++visited;
          stack.push_back(y);
        }
      }
    }
    if (visited != n) return false;
    std::size_t i = removals;
    while (i > 0 && pick[i - 1] == n - removals + i - 1) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < removals; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace tvg
