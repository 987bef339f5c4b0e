#include "tvg/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include "tvg/detail/disjoint_sets.hpp"

namespace tvg {

void EmpiricalPmf::record(std::optional<int> latency) {
  ++trials;
  if (!latency) {
    ++undelivered;
    return;
  }
  const auto l = static_cast<std::size_t>(*latency);
  if (counts.size() <= l) counts.resize(l + 1, 0);
  ++counts[l];
}

void EmpiricalPmf::merge(const EmpiricalPmf& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
  for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
  trials += other.trials;
  undelivered += other.undelivered;
}

double EmpiricalPmf::probability(int latency) const noexcept {
  if (trials == 0 || latency < 0 || static_cast<std::size_t>(latency) >= counts.size()) return 0.0;
  return static_cast<double>(counts[static_cast<std::size_t>(latency)]) / static_cast<double>(trials);
}

double EmpiricalPmf::mean() const noexcept {
  const auto d = delivered();
  if (d == 0) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += static_cast<double>(i) * static_cast<double>(counts[i]);
  return s / static_cast<double>(d);
}

double EmpiricalPmf::standard_error() const noexcept {
  const auto d = delivered();
  if (d < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mu = mean();
  double ss = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double x = static_cast<double>(i) - mu;
    ss += x * x * static_cast<double>(counts[i]);
  }
  const double var = ss / static_cast<double>(d - 1);
  return std::sqrt(var / static_cast<double>(d));
}

NextHopPolicy hop_distance_policy(const UnderlyingGraph& gu, NodeId dest) {
  auto dist = gu.hop_distances(dest);
  return [gu, dist = std::move(dist)](NodeId holder, std::span<const NodeId> on) -> std::optional<NodeId> {
    std::optional<NodeId> best;
    int best_d = dist[gu.index_of(holder)];
    for (const auto v : on) {
      const int d = dist[gu.index_of(v)];
      if (d >= 0 && (d < best_d || (best && d == best_d && v < *best))) {
        best = v;
        best_d = d;
      }
    }
    return best;
  };
}

CutPolicy hop_distance_cut_policy(const UnderlyingGraph& gu, NodeId dest) {
  auto dist = gu.hop_distances(dest);
  return [gu, dist = std::move(dist)](NodeId holder, std::span<const NodeId> component) -> NodeId {
    NodeId best = holder;
    int best_d = dist[gu.index_of(holder)];
    for (const auto v : component) {
      const int d = dist[gu.index_of(v)];
      if (d >= 0 && (d < best_d || (d == best_d && v < best))) {
        best = v;
        best_d = d;
      }
    }
    return best;
  };
}

int default_horizon(const EdgeModel& model, std::size_t nodes) {
  const double on = steady_on_probability(model);
  if (on <= 0.0) throw std::invalid_argument("edges are never ON; give an explicit horizon");
  const double h = std::ceil(20.0 * static_cast<double>(nodes - 1) / on);
  return static_cast<int>(std::min(h, 1.0e8));
}

TrialResult soa_trial(const UnderlyingGraph& gu, Realization& edges, NodeId source, NodeId dest, int horizon,
                      const NextHopPolicy& policy, bool record_trajectory) {
  TrialResult r;
  NodeId at = source;
  if (record_trajectory) r.trajectory.emplace_back(at, 0);
  if (at == dest) {
    r.latency = 0;
    return r;
  }
  std::vector<NodeId> on;
  for (int t = 1; t <= horizon; ++t) {
    const auto& state = edges.slot(t);
    on.clear();
    for (const auto& inc : gu.incident(gu.index_of(at))) {
      if (state[inc.edge]) on.push_back(gu.nodes()[inc.neighbor]);
    }
    if (const auto next = policy(at, on)) {
      if (std::find(on.begin(), on.end(), *next) == on.end()) {
        throw std::logic_error("policy chose a node that is not an ON neighbor");
      }
      at = *next;
    }
    if (record_trajectory) r.trajectory.emplace_back(at, t);
    if (at == dest) {
      r.latency = t;
      return r;
    }
  }
  return r;
}

TrialResult cut_trial(const UnderlyingGraph& gu, Realization& edges, NodeId source, NodeId dest, int horizon,
                      const CutPolicy& policy, bool record_trajectory) {
  TrialResult r;
  NodeId at = source;
  if (record_trajectory) r.trajectory.emplace_back(at, 0);
  std::vector<char> seen(gu.node_count());
  std::vector<std::size_t> stack;
  std::vector<NodeId> component;
  for (int t = 1; t <= horizon + 1; ++t) {
    const auto& state = edges.slot(t);
    std::fill(seen.begin(), seen.end(), 0);
    component.clear();
    const auto start = gu.index_of(at);
    stack.assign(1, start);
    seen[start] = 1;
    bool delivered = false;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      component.push_back(gu.nodes()[x]);
      if (gu.nodes()[x] == dest) delivered = true;
      for (const auto& inc : gu.incident(x)) {
        if (state[inc.edge] && !seen[inc.neighbor]) {
          seen[inc.neighbor] = 1;
          stack.push_back(inc.neighbor);
        }
      }
    }
    if (delivered) {
      if (record_trajectory) r.trajectory.emplace_back(dest, t);
      r.latency = t - 1;
      return r;
    }
    std::sort(component.begin(), component.end());
    const auto next = policy(at, component);
    if (!std::binary_search(component.begin(), component.end(), next)) {
      throw std::logic_error("cut policy chose a node outside the current component");
    }
    at = next;
    if (record_trajectory) r.trajectory.emplace_back(at, t);
  }
  return r;
}

namespace {

void check_setup(const SimulationSetup& s) {
  validate(s.model);
  if (s.trials == 0) throw std::invalid_argument("trials must be positive");
  if (!s.gu.contains(s.source) || !s.gu.contains(s.dest)) throw std::invalid_argument("source/dest not in graph");
  if (s.gu.hop_distances(s.dest)[s.gu.index_of(s.source)] < 0) {
    throw std::invalid_argument("destination unreachable from source in the underlying graph");
  }
  if (s.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
}

int horizon_of(const SimulationSetup& s) {
  return s.horizon > 0 ? s.horizon : default_horizon(s.model, s.gu.node_count());
}

void merge_into(EmpiricalPmf& into, const EmpiricalPmf& from) { into.merge(from); }

void merge_into(PairedLatency& into, const PairedLatency& from) {
  into.soa.merge(from.soa);
  into.cut.merge(from.cut);
  into.cut_slower_than_soa += from.cut_slower_than_soa;
}

// Runs trial(i, acc) for i in [0, trials). The parallel kernel keeps one
// accumulator per thread; merging integer counts makes the result
// independent of scheduling.
template <class Acc, class Trial>
Acc run_trials(std::uint64_t trials, Execution exec, Trial&& trial) {
  Acc total{};
  if (exec == Execution::serial) {
    for (std::uint64_t i = 0; i < trials; ++i) trial(i, total);
    return total;
  }
  const auto n = static_cast<long long>(trials);
  std::exception_ptr failure;
#pragma omp parallel
  {
    Acc local{};
#pragma omp for schedule(static)
    for (long long i = 0; i < n; ++i) {
      try {
        trial(static_cast<std::uint64_t>(i), local);
      } catch (...) {
#pragma omp critical(tvg_trial_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(tvg_merge_trials)
    merge_into(total, local);
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

}  // namespace

EmpiricalPmf simulate_soa(const SimulationSetup& setup, const NextHopPolicy& policy, Execution exec) {
  check_setup(setup);
  const auto rule = policy ? policy : hop_distance_policy(setup.gu, setup.dest);
  const int horizon = horizon_of(setup);
  return run_trials<EmpiricalPmf>(setup.trials, exec, [&](std::uint64_t i, EmpiricalPmf& out) {
    Realization edges(setup.model, setup.gu.edges().size(), CounterRng(setup.seed, i));
    out.record(soa_trial(setup.gu, edges, setup.source, setup.dest, horizon, rule).latency);
  });
}

EmpiricalPmf simulate_cut(const SimulationSetup& setup, const CutPolicy& policy, Execution exec) {
  check_setup(setup);
  const auto rule = policy ? policy : hop_distance_cut_policy(setup.gu, setup.dest);
  const int horizon = horizon_of(setup);
  return run_trials<EmpiricalPmf>(setup.trials, exec, [&](std::uint64_t i, EmpiricalPmf& out) {
    Realization edges(setup.model, setup.gu.edges().size(), CounterRng(setup.seed, i));
    out.record(cut_trial(setup.gu, edges, setup.source, setup.dest, horizon, rule).latency);
  });
}

PairedLatency simulate_paired(const SimulationSetup& setup, const NextHopPolicy& soa_policy,
                              const CutPolicy& cut_policy, Execution exec) {
  check_setup(setup);
  const auto soa_rule = soa_policy ? soa_policy : hop_distance_policy(setup.gu, setup.dest);
  const auto cut_rule = cut_policy ? cut_policy : hop_distance_cut_policy(setup.gu, setup.dest);
  const int horizon = horizon_of(setup);
  return run_trials<PairedLatency>(setup.trials, exec, [&](std::uint64_t i, PairedLatency& acc) {
    Realization edges(setup.model, setup.gu.edges().size(), CounterRng(setup.seed, i));
    const auto soa = soa_trial(setup.gu, edges, setup.source, setup.dest, horizon, soa_rule).latency;
    const auto cut = cut_trial(setup.gu, edges, setup.source, setup.dest, horizon, cut_rule).latency;
    acc.soa.record(soa);
    acc.cut.record(cut);
    if (soa && (!cut || *cut > *soa)) ++acc.cut_slower_than_soa;
  });
}

double total_variation(const EmpiricalPmf& empirical, const LatencyPmf& analytic) {
  if (empirical.trials == 0) throw std::invalid_argument("empty empirical PMF");
  const int top = std::max(static_cast<int>(empirical.counts.size()) - 1, analytic.max_latency());
  double diff = 0.0;
  double covered = 0.0;
  for (int l = 0; l <= top; ++l) {
    const double a = analytic.at(l);
    covered += a;
    diff += std::abs(empirical.probability(l) - a);
  }
  const double undelivered = static_cast<double>(empirical.undelivered) / static_cast<double>(empirical.trials);
  diff += std::abs(undelivered - std::max(0.0, 1.0 - covered));
  return 0.5 * diff;
}

namespace {

struct TrialCurve {
  std::vector<double> stacked;
  std::vector<double> smashed;
};

// Bitmask kernel: reach[u] is the set T-reachable from u; each slot merges
// the components the set touches. The smashed graph is the running union.
TrialCurve reach_trial(const UnderlyingGraph& gu, Realization& edges, int max_horizon) {
  const std::size_t n = gu.node_count();
  const double pairs = static_cast<double>(n * (n - 1));
  std::vector<std::uint64_t> reach(n);
  for (std::size_t u = 0; u < n; ++u) reach[u] = std::uint64_t{1} << u;
  detail::DisjointSets merged(n);
  std::vector<std::uint64_t> comp_mask(n);
  std::vector<std::size_t> root(n);
  TrialCurve out;
  out.stacked.reserve(static_cast<std::size_t>(max_horizon));
  out.smashed.reserve(static_cast<std::size_t>(max_horizon));
  for (int t = 1; t <= max_horizon; ++t) {
    const auto& state = edges.slot(t);
    detail::DisjointSets slot(n);
    for (std::size_t e = 0; e < state.size(); ++e) {
      if (!state[e]) continue;
      const auto a = gu.index_of(gu.edges()[e].u);
      const auto b = gu.index_of(gu.edges()[e].v);
      slot.unite(a, b);
      merged.unite(a, b);
    }
    std::fill(comp_mask.begin(), comp_mask.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      root[i] = slot.find(i);
      comp_mask[root[i]] |= std::uint64_t{1} << i;
    }
    std::size_t stacked_pairs = 0;
    for (std::size_t u = 0; u < n; ++u) {
      std::uint64_t next = reach[u];
      for (std::uint64_t bits = reach[u]; bits != 0; bits &= bits - 1) {
        next |= comp_mask[root[static_cast<std::size_t>(std::countr_zero(bits))]];
      }
      reach[u] = next;
      stacked_pairs += static_cast<std::size_t>(std::popcount(next)) - 1;
    }
    std::size_t smashed_pairs = 0;
    for (std::size_t i = 0; i < n; ++i) smashed_pairs += merged.size_of(i) - 1;
    out.stacked.push_back(static_cast<double>(stacked_pairs) / pairs);
    out.smashed.push_back(static_cast<double>(smashed_pairs) / pairs);
  }
  return out;
}

}  // namespace

ReachCurves empirical_reachable_pairs(const EdgeModel& model, const UnderlyingGraph& gu, int max_horizon,
                                      std::uint64_t trials, std::uint64_t seed, Execution exec) {
  validate(model);
  if (gu.node_count() < 2 || gu.node_count() > 64) throw std::invalid_argument("reach curves need 2..64 nodes");
  if (max_horizon < 0) throw std::invalid_argument("max_horizon must be >= 0");
  if (trials == 0) throw std::invalid_argument("trials must be positive");

  std::vector<TrialCurve> per_trial(trials);
  auto one = [&](std::uint64_t i) {
    Realization edges(model, gu.edges().size(), CounterRng(seed, i));
    per_trial[i] = reach_trial(gu, edges, max_horizon);
  };
  if (exec == Execution::serial) {
    for (std::uint64_t i = 0; i < trials; ++i) one(i);
  } else {
    const auto n = static_cast<long long>(trials);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) {
      try {
        one(static_cast<std::uint64_t>(i));
      } catch (...) {
#pragma omp critical(tvg_trial_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  // Reduction in trial order keeps floating-point sums reproducible.
  ReachCurves curves;
  curves.trials = trials;
  curves.points.push_back({0, 0.0, 0.0, 0.0, 0.0});
  const double k = static_cast<double>(trials);
  for (int t = 1; t <= max_horizon; ++t) {
    const auto ti = static_cast<std::size_t>(t - 1);
    double s1 = 0, s2 = 0, m1 = 0, m2 = 0;
    for (const auto& c : per_trial) {
      s1 += c.stacked[ti];
      s2 += c.stacked[ti] * c.stacked[ti];
      m1 += c.smashed[ti];
      m2 += c.smashed[ti] * c.smashed[ti];
      if (c.smashed[ti] < c.stacked[ti]) ++curves.pointwise_violations;
    }
    auto stderr_of = [&](double sum, double sq) {
      if (trials < 2) return 0.0;
      const double var = std::max(0.0, (sq - sum * sum / k) / (k - 1.0));
      return std::sqrt(var / k);
    };
    curves.points.push_back({t, s1 / k, stderr_of(s1, s2), m1 / k, stderr_of(m1, m2)});
  }
  return curves;
}

std::vector<CurvePoint> reachable_pairs_curve(const ReachCurves& curves, Representation rep) {
  std::vector<CurvePoint> out;
  out.reserve(curves.points.size());
  for (const auto& p : curves.points) {
    if (rep == Representation::stacked) {
      out.push_back({p.horizon, p.stacked_mean, p.stacked_stderr});
    } else {
      out.push_back({p.horizon, p.smashed_mean, p.smashed_stderr});
    }
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> prefix_reach_fractions(const Tgs& tgs) {
  std::vector<double> stacked, smashed;
  std::vector<Graphlet> prefix;
  for (const auto& g : tgs.graphlets()) {
    prefix.push_back(g);
    const Tgs part(prefix);
    stacked.push_back(reachable_pairs_fraction(part));
    smashed.push_back(connected_pairs_fraction(smash(part)));
  }
  return {std::move(stacked), std::move(smashed)};
}

}  // namespace tvg
