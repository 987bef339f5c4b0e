#pragma once

// Exact latency and packet-location distributions on dynamic line graphs
// L_n (source node 0, destination node n-1), and reachability CDFs of the
// stacked, smashed and m-smashed representations.

#include <functional>
#include <span>
#include <vector>

#include "tvg/dyn_models.hpp"

namespace tvg {

/// PMF over latency in slots. masses[i] is P(T = offset + i); everything
/// beyond offset + masses.size() - 1 is lumped into truncation_mass.
struct LatencyPmf {
  int offset{};
  std::vector<double> masses;
  double truncation_mass{};

  double at(int latency) const noexcept;
  int max_latency() const noexcept { return offset + static_cast<int>(masses.size()) - 1; }
};

/// Location of the packet after t slots; masses[k] is P(N_t = node k).
struct LocationPmf {
  int time{};
  std::vector<double> masses;

  double mean() const noexcept;
};

/// Mean and variance of the truncated masses (not renormalized).
struct Moments {
  double mean{};
  double variance{};
  double truncation_mass{};
};

LocationPmf er_soa_location_pmf(int n, double p, int t);

LatencyPmf er_soa_latency_pmf(int n, double p, int max_latency);
LatencyPmf er_cut_latency_pmf(int n, double p, int max_latency);
/// Markov PMFs require 0 < p, q <= 1 and a stationary start.
LatencyPmf mc_cut_latency_pmf(int n, const MarkovParams& mc, int max_latency);
LatencyPmf mc_soa_latency_pmf(int n, const MarkovParams& mc, int max_latency);

/// Re-evaluates `make(max_latency)` with doubling horizons until the
/// truncation mass drops below `tail`.
LatencyPmf pmf_until_tail(const std::function<LatencyPmf(int)>& make, double tail, int initial = 64);

/// Analytic latency PMF for a line model, extended until the tail is below `tail`.
LatencyPmf line_latency_pmf(int n, const EdgeModel& model, Metric metric, double tail = 1e-12);

Moments pmf_moments(const LatencyPmf& pmf);

/// P(node 0 reaches node n-1 within t graphlets) in the stacked graph.
double stacked_reach_cdf(int n, double p, int t);
/// Same event in the fully smashed graph.
double smashed_reach_cdf(int n, double p, int t);
/// Same event after smashing blocks of m slots. When m does not divide t
/// the last block covers the remaining t mod m slots.
double m_smashed_reach_cdf(int n, double p, int t, int m);
/// Smashed-graph reachability under a stationary Markov edge process.
double mc_smashed_reach_cdf(int n, const MarkovParams& mc, int t);

/// Probability that the cut-through sweep crosses all n-1 line edges when
/// graphlet b has every edge ON independently with probability block_on[b].
double line_block_reach_probability(int n, std::span<const double> block_on);

}  // namespace tvg
