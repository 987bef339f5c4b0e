#pragma once

// Deterministic temporal graphs: graphlet sequences, their stacked and
// smashed representations, and the T-* properties evaluated on them.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tvg {

using NodeId = std::uint32_t;

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u{};
  NodeId v{};

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes endpoint order. Throws std::invalid_argument on a self-loop.
Edge make_edge(NodeId a, NodeId b);

class Graphlet {
 public:
  /// Sorts and validates: endpoints must be in `nodes`, no duplicate edges.
  Graphlet(int time, std::vector<NodeId> nodes, std::vector<Edge> edges);

  int time() const noexcept { return time_; }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  bool has_node(NodeId id) const noexcept;
  bool has_edge(NodeId a, NodeId b) const noexcept;

 private:
  int time_;
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
};

class TemporalGraphletSequence {
 public:
  /// Graphlet i must carry time i + 1 and the sequence must be non-empty.
  explicit TemporalGraphletSequence(std::vector<Graphlet> graphlets);

  /// Every slot holds nodes 0..n-1; edges[t] are the edges of slot t + 1.
  static TemporalGraphletSequence uniform(NodeId n, const std::vector<std::vector<Edge>>& edges);

  int horizon() const noexcept { return static_cast<int>(graphlets_.size()); }
  std::span<const Graphlet> graphlets() const noexcept { return graphlets_; }
  /// 1-based slot access.
  const Graphlet& at(int slot) const;
  /// Sorted union of node ids over all slots.
  std::span<const NodeId> node_universe() const noexcept { return universe_; }
  bool contains(NodeId id) const noexcept;

 private:
  std::vector<Graphlet> graphlets_;
  std::vector<NodeId> universe_;
};

using Tgs = TemporalGraphletSequence;

/// A (node, slot) vertex of the stacked graph.
struct StackedVertex {
  NodeId id{};
  int time{};

  friend constexpr auto operator<=>(const StackedVertex&, const StackedVertex&) = default;
};

struct StackedArc {
  std::size_t from{};
  std::size_t to{};
  bool cross{};
};

/// Directed time-expanded graph. Each slot edge becomes two arcs inside its
/// layer; cross arcs link (u, t) -> (u, t + 1) when u is present in both.
class StackedGraph {
 public:
  StackedGraph(std::vector<StackedVertex> vertices, std::vector<StackedArc> arcs);

  std::span<const StackedVertex> vertices() const noexcept { return vertices_; }
  std::span<const StackedArc> arcs() const noexcept { return arcs_; }
  std::optional<std::size_t> index_of(NodeId id, int time) const;
  std::span<const std::size_t> successors(std::size_t v) const;
  std::size_t cross_arc_count() const noexcept;

  /// Directed reachability between stacked vertices.
  bool reaches(std::size_t from, std::size_t to) const;

 private:
  std::vector<StackedVertex> vertices_;
  std::vector<StackedArc> arcs_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
};

struct SmashedGraph {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
};

StackedGraph build_stacked(const Tgs& tgs);
SmashedGraph smash(const Tgs& tgs);
/// Smashes consecutive blocks of m slots; the last block may be shorter.
Tgs m_smash(const Tgs& tgs, int m);

/// One step of a journey: `from` hands the message to `to` during `slot`.
struct JourneyHop {
  NodeId from{};
  NodeId to{};
  int slot{};
};

struct Reachability {
  bool reachable{};
  std::vector<JourneyHop> journey;
};

bool t_adjacent(const Tgs& tgs, NodeId u, NodeId v);
/// Journeys may use several edges of one slot (slot times are non-decreasing).
/// A message is held at a node only across slots in which the node is present.
Reachability t_reachable(const Tgs& tgs, NodeId u, NodeId v);
/// Whether some (v, t) is reachable from (u, first slot of u) in the stacked
/// graph. With every node present in every slot this is (v, T) from (u, 1).
bool stacked_reachable(const StackedGraph& stg, NodeId u, NodeId v);
/// Largest pairwise T-adjacent subset of V(1); ties go to the lexicographically smallest.
std::vector<NodeId> t_clique(const Tgs& tgs);
/// Every ordered pair stays T-reachable after removing any k - 1 node ids from all slots.
bool t_k_connected(const Tgs& tgs, int k);
/// Fraction of ordered pairs (u != v) with u T-reachable to v.
double reachable_pairs_fraction(const Tgs& tgs);
/// Fraction of ordered pairs (u != v) connected in the smashed graph.
double connected_pairs_fraction(const SmashedGraph& smg);

/// Vertex k-connectivity of the undirected version of the stacked graph,
/// checked by removing every (k - 1)-subset of stacked vertices.
bool stacked_k_connected(const StackedGraph& stg, int k);

}  // namespace tvg
