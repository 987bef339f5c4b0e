#include <cmath>

#include "doctest.h"
#include "tvg/latency.hpp"
#include "tvg/simulator.hpp"

using namespace tvg;

namespace {

SimulationSetup line_setup(EdgeModel model, NodeId n, std::uint64_t trials, std::uint64_t seed) {
  return {model, UnderlyingGraph::line(n), 0, n - 1, 0, trials, seed};
}

}  // namespace

TEST_CASE("empirical PMF bookkeeping") {
  EmpiricalPmf e;
  e.record(3);
  e.record(3);
  e.record(5);
  e.record(std::nullopt);
  CHECK(e.trials == 4);
  CHECK(e.delivered() == 3);
  CHECK(e.probability(3) == 0.5);
  CHECK(e.probability(9) == 0.0);
  CHECK(e.mean() == doctest::Approx(11.0 / 3.0));
  EmpiricalPmf f;
  f.record(1);
  e.merge(f);
  CHECK(e.trials == 5);
  CHECK(e.counts[1] == 1);
}

TEST_CASE("default horizon") {
  CHECK(default_horizon(ErParams{0.25}, 10) == 720);
  CHECK(default_horizon(MarkovParams::stationary(0.5, 0.5), 3) == 80);
  CHECK_THROWS_AS(default_horizon(ErParams{0.0}, 3), std::invalid_argument);
}

TEST_CASE("single trials on hand-made realizations") {
  // p = 1: every edge always ON.
  const auto gu = UnderlyingGraph::line(5);
  Realization all_on(ErParams{1.0}, gu.edges().size(), CounterRng(1));
  const auto soa = soa_trial(gu, all_on, 0, 4, 100, hop_distance_policy(gu, 4), true);
  CHECK(soa.latency == 4);
  REQUIRE(soa.trajectory.size() == 5);
  CHECK(soa.trajectory.front() == std::pair<NodeId, int>{0, 0});
  CHECK(soa.trajectory.back() == std::pair<NodeId, int>{4, 4});
  CHECK(cut_trial(gu, all_on, 0, 4, 100, hop_distance_cut_policy(gu, 4)).latency == 0);

  Realization all_off(ErParams{0.0}, gu.edges().size(), CounterRng(1));
  CHECK_FALSE(soa_trial(gu, all_off, 0, 4, 50, hop_distance_policy(gu, 4)).latency);
  CHECK_FALSE(cut_trial(gu, all_off, 0, 4, 50, hop_distance_cut_policy(gu, 4)).latency);
}

TEST_CASE("trial latencies agree with journeys on the sampled sequence") {
  const auto gu = UnderlyingGraph::line(6);
  for (std::uint64_t i = 0; i < 300; ++i) {
    Realization r(ErParams{0.4}, gu.edges().size(), CounterRng(77, i));
    const auto cut = cut_trial(gu, r, 0, 5, 40, hop_distance_cut_policy(gu, 5));
    const auto tgs = realization_to_tgs(gu, r, 40);
    // CuT delivers in the first slot s whose prefix makes 0 -> 5 T-reachable.
    std::optional<int> first;
    for (int s = 1; s <= 40 && !first; ++s) {
      std::vector<Graphlet> prefix(tgs.graphlets().begin(), tgs.graphlets().begin() + s);
      if (t_reachable(Tgs(prefix), 0, 5).reachable) first = s - 1;
    }
    CHECK(cut.latency == first);

    // SoA on the line: one edge per slot, so replay the holder's edge directly.
    int pos = 0;
    std::optional<int> soa_expect;
    for (int s = 1; s <= 40 && !soa_expect; ++s) {
      if (tgs.at(s).has_edge(static_cast<NodeId>(pos), static_cast<NodeId>(pos + 1))) ++pos;
      if (pos == 5) soa_expect = s;
    }
    CHECK(soa_trial(gu, r, 0, 5, 40, hop_distance_policy(gu, 5)).latency == soa_expect);
  }
}

TEST_CASE("invalid setups") {
  auto s = line_setup(ErParams{0.5}, 4, 0, 1);
  CHECK_THROWS_AS(simulate_soa(s), std::invalid_argument);
  s.trials = 10;
  s.dest = 9;
  CHECK_THROWS_AS(simulate_cut(s), std::invalid_argument);
  s.dest = 3;
  s.source = 3;
  const auto same = simulate_soa(s);
  CHECK(same.probability(0) == 1.0);
}

TEST_CASE("a policy outside the component is rejected") {
  auto s = line_setup(ErParams{0.5}, 4, 10, 1);
  CutPolicy bad = [](NodeId, std::span<const NodeId>) { return NodeId{99}; };
  CHECK_THROWS_AS(simulate_cut(s, bad, Execution::serial), std::logic_error);
  CHECK_THROWS_AS(simulate_cut(s, bad, Execution::parallel), std::logic_error);
}

TEST_CASE("serial and parallel kernels give identical results") {
  for (const EdgeModel model : {EdgeModel{ErParams{0.3}}, EdgeModel{MarkovParams::stationary(0.4, 0.2)}}) {
    const auto s = line_setup(model, 7, 5000, 123);
    const auto a = simulate_soa(s, {}, Execution::serial);
    const auto b = simulate_soa(s, {}, Execution::parallel);
    CHECK(a.counts == b.counts);
    CHECK(a.undelivered == b.undelivered);
    const auto c = simulate_cut(s, {}, Execution::serial);
    const auto d = simulate_cut(s, {}, Execution::parallel);
    CHECK(c.counts == d.counts);
    const auto pa = simulate_paired(s, {}, {}, Execution::serial);
    const auto pb = simulate_paired(s, {}, {}, Execution::parallel);
    CHECK(pa.soa.counts == pb.soa.counts);
    CHECK(pa.cut.counts == pb.cut.counts);
    CHECK(pa.soa.counts == a.counts);
  }
  const auto k8 = UnderlyingGraph::complete(8);
  const auto r1 = empirical_reachable_pairs(ErParams{0.1}, k8, 12, 300, 5, Execution::serial);
  const auto r2 = empirical_reachable_pairs(ErParams{0.1}, k8, 12, 300, 5, Execution::parallel);
  REQUIRE(r1.points.size() == r2.points.size());
  for (std::size_t i = 0; i < r1.points.size(); ++i) {
    CHECK(r1.points[i].stacked_mean == r2.points[i].stacked_mean);
    CHECK(r1.points[i].smashed_mean == r2.points[i].smashed_mean);
    CHECK(r1.points[i].stacked_stderr == r2.points[i].stacked_stderr);
  }
}

TEST_CASE("cut-through never takes longer than store-or-advance") {
  const auto s = line_setup(MarkovParams::stationary(0.3, 0.3), 8, 3000, 4);
  const auto paired = simulate_paired(s);
  CHECK(paired.cut_slower_than_soa == 0);
  CHECK(paired.cut.mean() < paired.soa.mean());
}

TEST_CASE("Monte Carlo agrees with the analytic PMFs") {
  struct Case {
    EdgeModel model;
    NodeId n;
  };
  for (const auto& c : {Case{ErParams{0.4}, 5}, Case{MarkovParams::stationary(0.5, 0.25), 6}}) {
    for (const auto metric : {Metric::store_or_advance, Metric::cut_through}) {
      const auto s = line_setup(c.model, c.n, 40000, 31);
      const auto emp = metric == Metric::store_or_advance ? simulate_soa(s) : simulate_cut(s);
      const auto pmf = line_latency_pmf(static_cast<int>(c.n), c.model, metric);
      CHECK(total_variation(emp, pmf) < 0.02);
      const auto m = pmf_moments(pmf);
      CHECK(std::abs(emp.mean() - m.mean) < 4 * emp.standard_error());
    }
  }
}

TEST_CASE("bitmask reach kernel matches core reachability") {
  const UnderlyingGraph gu({0, 1, 2, 3, 4, 5}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {1, 4}});
  const auto curves = empirical_reachable_pairs(ErParams{0.3}, gu, 8, 50, 17, Execution::serial);
  std::vector<double> stacked(8, 0.0), smashed(8, 0.0);
  for (std::uint64_t i = 0; i < 50; ++i) {
    Realization r(ErParams{0.3}, gu.edges().size(), CounterRng(17, i));
    const auto tgs = realization_to_tgs(gu, r, 8);
    const auto [st, sm] = prefix_reach_fractions(tgs);
    for (int t = 0; t < 8; ++t) {
      std::vector<Graphlet> prefix(tgs.graphlets().begin(), tgs.graphlets().begin() + t + 1);
      CHECK(st[t] == doctest::Approx(reachable_pairs_fraction(Tgs(prefix))));
      CHECK(sm[t] == doctest::Approx(connected_pairs_fraction(smash(Tgs(prefix)))));
      stacked[t] += st[t] / 50.0;
      smashed[t] += sm[t] / 50.0;
    }
  }
  CHECK(curves.points[0].stacked_mean == 0.0);
  for (int t = 1; t <= 8; ++t) {
    CHECK(curves.points[t].stacked_mean == doctest::Approx(stacked[t - 1]));
    CHECK(curves.points[t].smashed_mean == doctest::Approx(smashed[t - 1]));
  }
  CHECK(curves.pointwise_violations == 0);
  const auto line = reachable_pairs_curve(curves, Representation::smashed);
  CHECK(line.size() == 9);
  CHECK(line[3].fraction == curves.points[3].smashed_mean);
}
