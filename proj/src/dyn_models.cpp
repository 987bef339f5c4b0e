#include "tvg/dyn_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace tvg {

UnderlyingGraph::UnderlyingGraph(std::vector<NodeId> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw std::invalid_argument("duplicate node in underlying graph");
  }
  std::vector<Edge> seen;
  incidence_.resize(nodes_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    e = make_edge(e.u, e.v);
    if (!contains(e.u) || !contains(e.v)) {
      throw std::invalid_argument("edge endpoint not in underlying graph");
    }
    const auto a = index_of(e.u);
    const auto b = index_of(e.v);
    incidence_[a].push_back({b, i});
    incidence_[b].push_back({a, i});
    seen.push_back(e);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("duplicate edge in underlying graph");
  }
}

UnderlyingGraph UnderlyingGraph::line(NodeId n) {
  if (n < 2) throw std::invalid_argument("line graph needs n >= 2");
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return UnderlyingGraph(std::move(nodes), std::move(edges));
}

UnderlyingGraph UnderlyingGraph::complete(NodeId n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return UnderlyingGraph(std::move(nodes), std::move(edges));
}

UnderlyingGraph UnderlyingGraph::from_tgs(const Tgs& tgs) {
  if (tgs.horizon() != 1) throw std::invalid_argument("an underlying graph file must contain exactly one slot");
  const auto& g = tgs.at(1);
  return UnderlyingGraph({g.nodes().begin(), g.nodes().end()}, {g.edges().begin(), g.edges().end()});
}

bool UnderlyingGraph::contains(NodeId id) const noexcept {
  return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

std::size_t UnderlyingGraph::index_of(NodeId id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) throw std::out_of_range("unknown node id " + std::to_string(id));
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<int> UnderlyingGraph::hop_distances(NodeId dest) const {
  std::vector<int> dist(nodes_.size(), -1);
  std::queue<std::size_t> q;
  const auto d = index_of(dest);
  dist[d] = 0;
  q.push(d);
  while (!q.empty()) {
    const auto x = q.front();
    q.pop();
    for (const auto& inc : incidence_[x]) {
      if (dist[inc.neighbor] < 0) {
        dist[inc.neighbor] = dist[x] + 1;
        q.push(inc.neighbor);
      }
    }
  }
  return dist;
}

namespace {

void check_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

}  // namespace

MarkovParams MarkovParams::stationary(double p, double q) {
  check_probability(p, "p");
  check_probability(q, "q");
  if (p + q <= 0.0) throw std::domain_error("stationary start undefined for p = q = 0");
  return {p, q, p / (p + q)};
}

bool MarkovParams::is_stationary_start(double tol) const noexcept {
  return p + q > 0.0 && std::abs(p0 - p / (p + q)) <= tol;
}

void validate(const ErParams& er) { check_probability(er.p, "p"); }

void validate(const MarkovParams& mc) {
  check_probability(mc.p, "p");
  check_probability(mc.q, "q");
  check_probability(mc.p0, "p0");
}

void validate(const EdgeModel& model) {
  std::visit([](const auto& m) { validate(m); }, model);
}

double steady_on_probability(const EdgeModel& model) {
  if (const auto* er = std::get_if<ErParams>(&model)) return er->p;
  const auto& mc = std::get<MarkovParams>(model);
  return stationary_distribution(mc).on;
}

StationaryDistribution stationary_distribution(const MarkovParams& mc) {
  check_probability(mc.p, "p");
  check_probability(mc.q, "q");
  if (mc.p + mc.q <= 0.0) throw std::domain_error("p = q = 0: every distribution is stationary");
  const double s = mc.p + mc.q;
  return {mc.p / s, mc.q / s};
}

Realization::Realization(EdgeModel model, std::size_t edge_count, CounterRng rng)
    : model_(model), edge_count_(edge_count), rng_(rng) {
  validate(model_);
}

const std::vector<char>& Realization::slot(int slot) {
  if (slot < 1) throw std::out_of_range("slots are 1-based");
  while (static_cast<int>(states_.size()) < slot) {
    const auto t = static_cast<std::uint64_t>(states_.size()) + 1;
    std::vector<char> next(edge_count_);
    if (const auto* er = std::get_if<ErParams>(&model_)) {
      for (std::size_t e = 0; e < edge_count_; ++e) next[e] = rng_.bernoulli(er->p, e, t);
    } else {
      const auto& mc = std::get<MarkovParams>(model_);
      if (states_.empty()) {
        for (std::size_t e = 0; e < edge_count_; ++e) next[e] = rng_.bernoulli(mc.p0, e, t);
      } else {
        const auto& prev = states_.back();
        for (std::size_t e = 0; e < edge_count_; ++e) {
          next[e] = prev[e] ? !rng_.bernoulli(mc.q, e, t) : rng_.bernoulli(mc.p, e, t);
        }
      }
    }
    states_.push_back(std::move(next));
  }
  return states_[static_cast<std::size_t>(slot - 1)];
}

Tgs realization_to_tgs(const UnderlyingGraph& gu, Realization& r, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const std::vector<NodeId> nodes(gu.nodes().begin(), gu.nodes().end());
  std::vector<Graphlet> gs;
  gs.reserve(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) {
    const auto& on = r.slot(t);
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < on.size(); ++e) {
      if (on[e]) edges.push_back(gu.edges()[e]);
    }
    gs.emplace_back(t, nodes, std::move(edges));
  }
  return Tgs(std::move(gs));
}

Tgs sample_tgs(const UnderlyingGraph& gu, const EdgeModel& model, int horizon, std::uint64_t seed,
               std::uint64_t stream) {
  Realization r(model, gu.edges().size(), CounterRng(seed, stream));
  return realization_to_tgs(gu, r, horizon);
}

Tgs sample_er_tgs(const UnderlyingGraph& gu, const ErParams& params, int horizon, std::uint64_t seed) {
  return sample_tgs(gu, params, horizon, seed);
}

Tgs sample_markov_tgs(const UnderlyingGraph& gu, const MarkovParams& params, int horizon, std::uint64_t seed) {
  return sample_tgs(gu, params, horizon, seed);
}

Configuration Configuration::parse(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("configuration must have at least one bit");
  Configuration c;
  for (const char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("configuration bits must be '0' or '1'");
    c.bits.push_back(ch == '1');
  }
  return c;
}

ConfigStats config_stats(const Configuration& c) {
  if (c.bits.empty()) throw std::invalid_argument("empty configuration");
  ConfigStats s{0, c.bits.front() ? 1 : 0};
  for (std::size_t i = 1; i < c.bits.size(); ++i) s.changes += (c.bits[i] != c.bits[i - 1]);
  return s;
}

int alternating_cut_latency(const Configuration& c) {
  const auto s = config_stats(c);
  return s.changes + 1 - s.first_bit;
}

int alternating_soa_latency(const Configuration& c) {
  const auto s = config_stats(c);
  return 2 * static_cast<int>(c.edges()) - s.changes - s.first_bit;
}

int simulate_alternating(const Configuration& c, Metric metric) {
  const std::size_t edges = c.edges();
  if (edges == 0) throw std::invalid_argument("empty configuration");
  std::size_t at = 0;  // index of the node holding the message
  auto on = [&](std::size_t e, int t) { return (t % 2 == 1) ? c.bits[e] != 0 : c.bits[e] == 0; };
  for (int t = 1;; ++t) {
    if (metric == Metric::store_or_advance) {
      if (on(at, t) && ++at == edges) return t;
    } else {
      while (at < edges && on(at, t)) ++at;
      if (at == edges) return t - 1;
    }
  }
}

Rational alternating_average_latency(int n, Metric metric) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (n > kMaxAlternatingNodes) {
    throw std::invalid_argument("n = " + std::to_string(n) + " is too large to enumerate (max " +
                                std::to_string(kMaxAlternatingNodes) + ")");
  }
  const auto edges = static_cast<std::size_t>(n - 1);
  const long long count = 1LL << edges;
  long long total = 0;
  Configuration c{std::vector<char>(edges)};
  for (long long mask = 0; mask < count; ++mask) {
    for (std::size_t i = 0; i < edges; ++i) c.bits[i] = (mask >> i) & 1;
    total += metric == Metric::cut_through ? alternating_cut_latency(c) : alternating_soa_latency(c);
  }
  return Rational(total, count);
}

}  // namespace tvg
