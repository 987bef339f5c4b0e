#pragma once

// Stochastic edge processes over an underlying graph, sampled graphlet
// sequences, and the exact combinatorics of the (1,1) alternating model.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "tvg/rng.hpp"
#include "tvg/tgraph.hpp"

namespace tvg {

/// Candidate edges on which an edge process acts.
class UnderlyingGraph {
 public:
  UnderlyingGraph(std::vector<NodeId> nodes, std::vector<Edge> edges);

  /// Path 0 - 1 - ... - (n-1); edge i joins i and i + 1.
  static UnderlyingGraph line(NodeId n);
  static UnderlyingGraph complete(NodeId n);
  /// Slot 1 of a single-slot TGS file is the graph.
  static UnderlyingGraph from_tgs(const Tgs& tgs);

  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool contains(NodeId id) const noexcept;
  /// Dense index of a node id; throws std::out_of_range for unknown ids.
  std::size_t index_of(NodeId id) const;
  /// Neighbors of a node (dense indices) with the index of the joining edge.
  struct Incidence {
    std::size_t neighbor;
    std::size_t edge;
  };
  std::span<const Incidence> incident(std::size_t node_index) const { return incidence_[node_index]; }
  /// Hop distance of every node to `dest` (-1 when disconnected).
  std::vector<int> hop_distances(NodeId dest) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> incidence_;
};

struct ErParams {
  double p{};
};

struct MarkovParams {
  double p{};   // OFF -> ON
  double q{};   // ON -> OFF
  double p0{};  // ON probability in slot 1

  /// p0 set to the stationary ON probability; requires p + q > 0.
  static MarkovParams stationary(double p, double q);
  bool is_stationary_start(double tol = 1e-12) const noexcept;
};

using EdgeModel = std::variant<ErParams, MarkovParams>;

void validate(const ErParams& er);
void validate(const MarkovParams& mc);
void validate(const EdgeModel& model);
/// Per-slot marginal ON probability in steady state (p for ER, p/(p+q) for Markov).
double steady_on_probability(const EdgeModel& model);

struct StationaryDistribution {
  double on{};
  double off{};
};

/// Throws std::domain_error when p = q = 0 (every distribution is stationary).
StationaryDistribution stationary_distribution(const MarkovParams& mc);

/**
 * Lazily sampled edge states of one realization.
 *
 * Slot states are generated in order and cached, so any number of policies
 * can replay the same realization. Draws come from CounterRng(seed, stream)
 * with lane = edge index and step = slot.
 */
class Realization {
 public:
  Realization(EdgeModel model, std::size_t edge_count, CounterRng rng);

  /// ON/OFF state of every edge in 1-based `slot`.
  const std::vector<char>& slot(int slot);
  int generated() const noexcept { return static_cast<int>(states_.size()); }

 private:
  EdgeModel model_;
  std::size_t edge_count_;
  CounterRng rng_;
  std::vector<std::vector<char>> states_;
};

Tgs sample_er_tgs(const UnderlyingGraph& gu, const ErParams& params, int horizon, std::uint64_t seed);
Tgs sample_markov_tgs(const UnderlyingGraph& gu, const MarkovParams& params, int horizon, std::uint64_t seed);
Tgs sample_tgs(const UnderlyingGraph& gu, const EdgeModel& model, int horizon, std::uint64_t seed,
               std::uint64_t stream = 0);
/// Converts a realization prefix to a graphlet sequence over gu's nodes.
Tgs realization_to_tgs(const UnderlyingGraph& gu, Realization& r, int horizon);

enum class Metric { store_or_advance, cut_through };

/// Bit i is the state of line edge i in slot 1 of the (1,1) model.
struct Configuration {
  std::vector<char> bits;

  /// Parses a string of '0'/'1'; throws std::invalid_argument otherwise.
  static Configuration parse(std::string_view s);
  std::size_t edges() const noexcept { return bits.size(); }
};

struct ConfigStats {
  int changes{};    // adjacent unequal bit pairs
  int first_bit{};
};

ConfigStats config_stats(const Configuration& c);
/// Slots for cut-through routing along the alternating line: k + 1 - b.
int alternating_cut_latency(const Configuration& c);
/// Slots for store-or-advance routing along the alternating line: 2(n-1) - k - b.
int alternating_soa_latency(const Configuration& c);
/// Replays the alternating line slot by slot (slot t shows c when t is odd,
/// its complement otherwise) and returns the delivery latency.
int simulate_alternating(const Configuration& c, Metric metric);

using Rational = boost::rational<long long>;

constexpr int kMaxAlternatingNodes = 24;
/// Exact mean latency over all 2^(n-1) configurations; 2 <= n <= 24.
Rational alternating_average_latency(int n, Metric metric);

/// Text form of a model: `er p=<float> gu=<line|complete|file:PATH> n=<int>`
/// or `mc p=<float> q=<float> p0=<float|stationary> gu=... n=<int>`.
struct ModelSpec {
  EdgeModel model;
  std::string gu{"line"};  // "line", "complete" or "file:PATH"
  int n{};
};

ModelSpec parse_model_spec(std::string_view text);
std::string format_model_spec(const ModelSpec& spec);
UnderlyingGraph build_underlying(const ModelSpec& spec);

}  // namespace tvg
