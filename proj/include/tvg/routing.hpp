#pragma once

// Optimal adaptive next-hop routing on dynamic ER(p) graphs: minimum
// expected traversal times (METT), the prefix acceptance policy, and exact
// oracles used to check them.
//
// Cost convention: traversing an edge consumes the slot in which it is ON,
// so a node adjacent to the destination has METT 1/p.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "tvg/dyn_models.hpp"
#include "tvg/simulator.hpp"

namespace tvg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Relative gap below which a candidate counts as tied with the current cost.
inline constexpr double kTieTolerance = 1e-12;

struct MettTable {
  NodeId dest{};
  std::vector<NodeId> nodes;                 // sorted node ids
  std::vector<double> mett;                  // aligned with nodes
  std::vector<std::vector<NodeId>> policy;   // accepted next hops, cheapest first
  std::vector<NodeId> extraction_order;      // settle order (finite METT only)

  double at(NodeId id) const;
  std::span<const NodeId> policy_of(NodeId id) const;
};

struct PrefixChoice {
  double cost{kInfinity};
  std::size_t k{};  // number of cheapest candidates accepted
};

/// Best prefix of the ascending candidate METTs: accepting the k cheapest
/// costs 1/s_k + sum_i p (1-p)^(i-1) m_i / s_k with s_k = 1 - (1-p)^k.
/// Infinite candidates are never accepted; ties (within kTieTolerance) go to the smaller k.
PrefixChoice prefix_cost(double p, std::span<const double> sorted_metts);

MettTable compute_mett(const UnderlyingGraph& gu, double p, NodeId dest);

/// Cheapest ON neighbor whose METT is below u's (ties by id), or nothing.
std::optional<NodeId> adaptive_next_hop(const MettTable& table, NodeId u, std::span<const NodeId> on_neighbors);

NextHopPolicy adaptive_policy(const MettTable& table);
/// Cut to the cheapest member of the component when it improves on the holder.
CutPolicy mett_cut_policy(const MettTable& table);

/// Empirical latency of the greedy METT policy under ER(p) edges.
/// Throws when METT[source] is infinite.
EmpiricalPmf run_adaptive_route(const UnderlyingGraph& gu, double p, NodeId source, NodeId dest, int horizon,
                                std::uint64_t trials, std::uint64_t seed, Execution exec = Execution::parallel);

/// Value iteration over accept-set policies: V(u) = min over non-empty
/// A of N(u) of 1 + sum_i P(a_i is the best ON member) V(a_i) + (1-p)^|A| V(u).
/// Exponential in degree; meant for small graphs.
MettTable mett_value_iteration_oracle(const UnderlyingGraph& gu, double p, NodeId dest, double tolerance,
                                      int max_iterations = 1'000'000);

inline constexpr std::size_t kMaxCutEdges = 16;

/// Cut-through METT. Each slot's ON edge set is enumerated exactly
/// (2^|E| subsets); from u the message may cut to any node of its
/// component and only waiting costs a slot. Throws for more than
/// kMaxCutEdges edges.
MettTable cut_mett_small(const UnderlyingGraph& gu, double p, NodeId dest, double tolerance = 1e-13,
                         int max_iterations = 1'000'000);

/// {"dest": d, "nodes": {"<id>": {"mett": x | "inf", "policy": [...]}}}
nlohmann::json mett_to_json(const MettTable& table);

}  // namespace tvg
