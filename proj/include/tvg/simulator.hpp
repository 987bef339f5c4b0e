#pragma once

// Monte Carlo replay of store-or-advance and cut-through forwarding over
// sampled edge processes, plus reachable-pair statistics of stacked and
// smashed representations.
//
// Every trial reads its own counter-based stream CounterRng(seed, trial),
// so the serial and OpenMP kernels produce identical results.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tvg/dyn_models.hpp"
#include "tvg/latency.hpp"

namespace tvg {

enum class Execution { serial, parallel };

struct TrialResult {
  std::optional<int> latency;  // empty when not delivered within the horizon
  /// Holder after each slot, starting with (source, 0). Only filled on request.
  std::vector<std::pair<NodeId, int>> trajectory;
};

struct EmpiricalPmf {
  std::vector<std::uint64_t> counts;  // counts[l]: trials delivered with latency l
  std::uint64_t trials{};
  std::uint64_t undelivered{};

  void record(std::optional<int> latency);
  void merge(const EmpiricalPmf& other);
  std::uint64_t delivered() const noexcept { return trials - undelivered; }
  double probability(int latency) const noexcept;
  /// Mean and standard error over delivered trials.
  double mean() const noexcept;
  double standard_error() const noexcept;
};

/// SoA rule: given the holder and its currently ON neighbors, return the
/// neighbor to advance to, or nothing to wait.
using NextHopPolicy = std::function<std::optional<NodeId>(NodeId holder, std::span<const NodeId> on_neighbors)>;
/// CuT rule: given the holder and its current component (which excludes
/// the destination), return the member to cut through to.
using CutPolicy = std::function<NodeId(NodeId holder, std::span<const NodeId> component)>;

/// Advance to the ON neighbor closest to dest in hops, if it is strictly
/// closer than the holder. On L_n this forwards along the line.
NextHopPolicy hop_distance_policy(const UnderlyingGraph& gu, NodeId dest);
/// Cut to the component member closest to dest in hops (farthest along L_n).
CutPolicy hop_distance_cut_policy(const UnderlyingGraph& gu, NodeId dest);

struct SimulationSetup {
  EdgeModel model{ErParams{0.5}};
  UnderlyingGraph gu{UnderlyingGraph::line(2)};
  NodeId source{};
  NodeId dest{};
  int horizon{};  // 0 selects default_horizon()
  std::uint64_t trials{};
  std::uint64_t seed{};
};

/// 20 (n - 1) / p_on slots, where p_on is the steady ON probability.
int default_horizon(const EdgeModel& model, std::size_t nodes);

TrialResult soa_trial(const UnderlyingGraph& gu, Realization& edges, NodeId source, NodeId dest, int horizon,
                      const NextHopPolicy& policy, bool record_trajectory = false);
TrialResult cut_trial(const UnderlyingGraph& gu, Realization& edges, NodeId source, NodeId dest, int horizon,
                      const CutPolicy& policy, bool record_trajectory = false);

/// An empty policy falls back to hop_distance_policy.
EmpiricalPmf simulate_soa(const SimulationSetup& setup, const NextHopPolicy& policy = {},
                          Execution exec = Execution::parallel);
EmpiricalPmf simulate_cut(const SimulationSetup& setup, const CutPolicy& policy = {},
                          Execution exec = Execution::parallel);

/// Both metrics replayed on the same realization in every trial.
struct PairedLatency {
  EmpiricalPmf soa;
  EmpiricalPmf cut;
  std::uint64_t cut_slower_than_soa{};  // trials where CuT latency exceeded SoA latency
};

PairedLatency simulate_paired(const SimulationSetup& setup, const NextHopPolicy& soa_policy = {},
                              const CutPolicy& cut_policy = {}, Execution exec = Execution::parallel);

/// Total variation distance, counting undelivered trials against the
/// analytic mass beyond the compared range.
double total_variation(const EmpiricalPmf& empirical, const LatencyPmf& analytic);

enum class Representation { stacked, smashed };

struct ReachPoint {
  int horizon{};
  double stacked_mean{};
  double stacked_stderr{};
  double smashed_mean{};
  double smashed_stderr{};
};

struct ReachCurves {
  std::vector<ReachPoint> points;  // horizon 0..max_horizon
  std::uint64_t trials{};
  /// (trial, horizon) pairs where the smashed fraction fell below the stacked one.
  std::uint64_t pointwise_violations{};
};

/// Each trial samples one sequence of max_horizon graphlets and evaluates
/// every prefix on both representations. Requires at most 64 nodes.
ReachCurves empirical_reachable_pairs(const EdgeModel& model, const UnderlyingGraph& gu, int max_horizon,
                                      std::uint64_t trials, std::uint64_t seed,
                                      Execution exec = Execution::parallel);

struct CurvePoint {
  int horizon{};
  double fraction{};
  double stderr_{};
};

std::vector<CurvePoint> reachable_pairs_curve(const ReachCurves& curves, Representation rep);

/// Reachable-pair fractions for every prefix 1..T of one sequence (index t-1).
/// Serial reference for the bitmask kernel used by empirical_reachable_pairs.
std::pair<std::vector<double>, std::vector<double>> prefix_reach_fractions(const Tgs& tgs);

}  // namespace tvg
