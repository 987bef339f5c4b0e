#include "tvg/routing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

#include "tvg/detail/disjoint_sets.hpp"

namespace tvg {

namespace {

void require_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
}

std::size_t require_node(const UnderlyingGraph& gu, NodeId id, const char* what) {
  if (!gu.contains(id)) throw std::invalid_argument(std::string(what) + " " + std::to_string(id) + " not in graph");
  return gu.index_of(id);
}

MettTable empty_table(const UnderlyingGraph& gu, NodeId dest) {
  MettTable t;
  t.dest = dest;
  t.nodes.assign(gu.nodes().begin(), gu.nodes().end());
  t.mett.assign(t.nodes.size(), kInfinity);
  t.policy.assign(t.nodes.size(), {});
  return t;
}

// Neighbors of node index u as (mett, id) pairs sorted cheapest first.
std::vector<std::pair<double, NodeId>> ranked_neighbors(const UnderlyingGraph& gu, const std::vector<double>& value,
                                                        std::size_t u) {
  std::vector<std::pair<double, NodeId>> out;
  for (const auto& inc : gu.incident(u)) out.emplace_back(value[inc.neighbor], gu.nodes()[inc.neighbor]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double MettTable::at(NodeId id) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) throw std::out_of_range("unknown node id " + std::to_string(id));
  return mett[static_cast<std::size_t>(it - nodes.begin())];
}

std::span<const NodeId> MettTable::policy_of(NodeId id) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) throw std::out_of_range("unknown node id " + std::to_string(id));
  return policy[static_cast<std::size_t>(it - nodes.begin())];
}

PrefixChoice prefix_cost(double p, std::span<const double> sorted_metts) {
  require_p(p);
  PrefixChoice best;
  for (std::size_t k = 2; k <= sorted_metts.size(); ++k) {
    if (sorted_metts[k - 1] < sorted_metts[k - 2]) throw std::invalid_argument("candidate METTs must be ascending");
  }
  double weighted = 0.0;  // sum_i p (1-p)^(i-1) m_i
  double hit = 0.0;       // 1 - (1-p)^k, summed so that k = 1 gives p exactly
  double miss = 1.0;
  for (std::size_t k = 1; k <= sorted_metts.size(); ++k) {
    const double m = sorted_metts[k - 1];
    if (!std::isfinite(m)) break;
    // A candidate lowers the cost only if it is below the current cost; near-ties keep the shorter prefix.
    if (k > 1 && (miss == 0.0 || !(m < best.cost * (1.0 - kTieTolerance)))) break;
    weighted += p * miss * m;
    hit += p * miss;
    miss *= 1.0 - p;
    best = {(1.0 + weighted) / hit, k};
  }
  return best;
}

MettTable compute_mett(const UnderlyingGraph& gu, double p, NodeId dest) {
  require_p(p);
  const auto d = require_node(gu, dest, "destination");
  auto table = empty_table(gu, dest);
  auto& mett = table.mett;
  std::vector<char> settled(gu.node_count(), 0);

  // Settled neighbors of v, cheapest first, and the best prefix over them.
  auto evaluate = [&](std::size_t v) {
    std::vector<std::pair<double, NodeId>> cands;
    for (const auto& inc : gu.incident(v)) {
      if (settled[inc.neighbor]) cands.emplace_back(mett[inc.neighbor], gu.nodes()[inc.neighbor]);
    }
    std::sort(cands.begin(), cands.end());
    std::vector<double> values;
    for (const auto& c : cands) values.push_back(c.first);
    return std::make_pair(prefix_cost(p, values), std::move(cands));
  };

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  mett[d] = 0.0;
  frontier.emplace(0.0, dest);
  while (!frontier.empty()) {
    const auto [value, id] = frontier.top();
    frontier.pop();
    const auto u = gu.index_of(id);
    if (settled[u] || value != mett[u]) continue;
    settled[u] = 1;
    table.extraction_order.push_back(id);
    if (u != d) {
      const auto [choice, cands] = evaluate(u);
      for (std::size_t i = 0; i < choice.k; ++i) table.policy[u].push_back(cands[i].second);
    }
    for (const auto& inc : gu.incident(u)) {
      const auto v = inc.neighbor;
      if (settled[v]) continue;
      const auto choice = evaluate(v).first;
      if (choice.cost < mett[v]) {
        mett[v] = choice.cost;
        frontier.emplace(choice.cost, gu.nodes()[v]);
      }
    }
  }
  return table;
}

std::optional<NodeId> adaptive_next_hop(const MettTable& table, NodeId u, std::span<const NodeId> on_neighbors) {
  const double here = table.at(u);
  std::optional<NodeId> best;
  double best_value = here;
  for (const auto v : on_neighbors) {
    const double m = table.at(v);
    if (m < best_value || (best && m == best_value && v < *best)) {
      best = v;
      best_value = m;
    }
  }
  return best;
}

NextHopPolicy adaptive_policy(const MettTable& table) {
  return [table](NodeId u, std::span<const NodeId> on) { return adaptive_next_hop(table, u, on); };
}

CutPolicy mett_cut_policy(const MettTable& table) {
  return [table](NodeId holder, std::span<const NodeId> component) {
    NodeId best = holder;
    double best_value = table.at(holder);
    for (const auto v : component) {
      const double m = table.at(v);
      if (m < best_value || (m == best_value && best != holder && v < best)) {
        best = v;
        best_value = m;
      }
    }
    return best;
  };
}

EmpiricalPmf run_adaptive_route(const UnderlyingGraph& gu, double p, NodeId source, NodeId dest, int horizon,
                                std::uint64_t trials, std::uint64_t seed, Execution exec) {
  require_node(gu, source, "source");
  const auto table = compute_mett(gu, p, dest);
  if (!std::isfinite(table.at(source))) {
    throw std::invalid_argument("METT of source " + std::to_string(source) + " is infinite");
  }
  SimulationSetup setup{ErParams{p}, gu, source, dest, horizon, trials, seed};
  // Every move must strictly decrease METT.
  NextHopPolicy checked = [table](NodeId u, std::span<const NodeId> on) {
    const auto next = adaptive_next_hop(table, u, on);
    if (next && !(table.at(*next) < table.at(u))) {
      throw std::logic_error("adaptive policy moved from " + std::to_string(u) + " to " + std::to_string(*next) +
                             " without decreasing METT");
    }
    return next;
  };
  return simulate_soa(setup, checked, exec);
}

MettTable mett_value_iteration_oracle(const UnderlyingGraph& gu, double p, NodeId dest, double tolerance,
                                      int max_iterations) {
  require_p(p);
  const auto d = require_node(gu, dest, "destination");
  const auto hops = gu.hop_distances(dest);
  const std::size_t n = gu.node_count();
  for (std::size_t u = 0; u < n; ++u) {
    if (hops[u] >= 0 && gu.incident(u).size() > 20) throw std::invalid_argument("degree too large for subset enumeration");
  }

  auto table = empty_table(gu, dest);
  std::vector<double> value(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (hops[u] < 0) value[u] = kInfinity;
  }
  std::vector<std::vector<NodeId>> best_set(n);

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<double> next = value;
    double delta = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == d || hops[u] < 0) continue;
      const auto ranked = ranked_neighbors(gu, value, u);
      const std::size_t deg = ranked.size();
      double best = kInfinity;
      std::vector<NodeId> chosen;
      for (std::uint32_t mask = 1; mask < (1u << deg); ++mask) {
        double expect = 1.0;
        double miss = 1.0;
        for (std::size_t i = 0; i < deg; ++i) {
          if (!(mask >> i & 1u)) continue;
          expect += p * miss * ranked[i].first;
          miss *= 1.0 - p;
        }
        expect += miss * value[u];
        if (expect < best) {
          best = expect;
          chosen.clear();
          for (std::size_t i = 0; i < deg; ++i) {
            if (mask >> i & 1u) chosen.push_back(ranked[i].second);
          }
        }
      }
      next[u] = best;
      best_set[u] = std::move(chosen);
      delta = std::max(delta, std::abs(next[u] - value[u]));
    }
    value = std::move(next);
    if (delta < tolerance) {
      table.mett = value;
      table.policy = best_set;
      std::vector<std::pair<double, NodeId>> order;
      for (std::size_t u = 0; u < n; ++u) {
        if (std::isfinite(value[u])) order.emplace_back(value[u], gu.nodes()[u]);
      }
      std::sort(order.begin(), order.end());
      for (const auto& o : order) table.extraction_order.push_back(o.second);
      return table;
    }
  }
  throw std::runtime_error("value iteration did not converge within " + std::to_string(max_iterations) + " sweeps");
}

MettTable cut_mett_small(const UnderlyingGraph& gu, double p, NodeId dest, double tolerance, int max_iterations) {
  require_p(p);
  const auto d = require_node(gu, dest, "destination");
  const std::size_t n = gu.node_count();
  const std::size_t m = gu.edges().size();
  if (m > kMaxCutEdges) {
    throw std::invalid_argument("cut_mett_small enumerates 2^|E| edge sets; " + std::to_string(m) +
                                " edges is too many, use Monte Carlo evaluation instead");
  }
  if (n > 64) throw std::invalid_argument("cut_mett_small supports at most 64 nodes");

  // Distribution of u's component mask over all ON edge subsets.
  std::vector<std::map<std::uint64_t, double>> reach(n);
  for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
    const int on = std::popcount(subset);
    const double w = pow(p, on) * pow(1.0 - p, static_cast<double>(m) - on);
    if (w == 0.0) continue;
    detail::DisjointSets ds(n);
    for (std::size_t e = 0; e < m; ++e) {
      if (subset >> e & 1u) ds.unite(gu.index_of(gu.edges()[e].u), gu.index_of(gu.edges()[e].v));
    }
    std::vector<std::uint64_t> mask(n, 0);
    for (std::size_t i = 0; i < n; ++i) mask[ds.find(i)] |= std::uint64_t{1} << i;
    for (std::size_t u = 0; u < n; ++u) reach[u][mask[ds.find(u)]] += w;
  }

  const auto hops = gu.hop_distances(dest);
  std::vector<double> value(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (hops[u] < 0) value[u] = kInfinity;
  }
  const std::uint64_t dest_bit = std::uint64_t{1} << d;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    std::vector<double> next = value;
    double delta = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == d || hops[u] < 0) continue;
      double expect = 0.0;
      for (const auto& [mask, w] : reach[u]) {
        if (mask & dest_bit) continue;
        double best = kInfinity;
        for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
          best = std::min(best, value[static_cast<std::size_t>(std::countr_zero(bits))]);
        }
        expect += w * (1.0 + best);
      }
      next[u] = expect;
      delta = std::max(delta, std::abs(next[u] - value[u]));
    }
    value = std::move(next);
    if (delta < tolerance) break;
  }
  if (iter == max_iterations) throw std::runtime_error("cut METT iteration did not converge");

  auto table = empty_table(gu, dest);
  table.mett = value;
  std::vector<std::pair<double, NodeId>> order;
  for (std::size_t u = 0; u < n; ++u) {
    if (std::isfinite(value[u])) order.emplace_back(value[u], gu.nodes()[u]);
  }
  std::sort(order.begin(), order.end());
  for (const auto& o : order) table.extraction_order.push_back(o.second);
  for (std::size_t u = 0; u < n; ++u) {
    if (u == d || !std::isfinite(value[u])) continue;
    for (const auto& [v, id] : order) {
      if (v < value[u]) table.policy[u].push_back(id);
    }
  }
  return table;
}

nlohmann::json mett_to_json(const MettTable& table) {
  nlohmann::json nodes = nlohmann::json::object();
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    nlohmann::json entry;
    if (std::isfinite(table.mett[i])) {
      entry["mett"] = table.mett[i];
    } else {
      entry["mett"] = "inf";
    }
    entry["policy"] = table.policy[i];
    nodes[std::to_string(table.nodes[i])] = std::move(entry);
  }
  return {{"dest", table.dest}, {"nodes", std::move(nodes)}};
}

}  // namespace tvg
