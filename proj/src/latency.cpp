#include "tvg/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tvg/numerics.hpp"

namespace tvg {

namespace {

void require_line(int n) {
  if (n < 2) throw std::invalid_argument("line length n must be >= 2");
}

void require_er(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]; p = 0 never delivers");
}

void require_markov(const MarkovParams& mc) {
  if (!(mc.p > 0.0 && mc.p <= 1.0 && mc.q > 0.0 && mc.q <= 1.0)) {
    throw std::invalid_argument("Markov latency PMFs need 0 < p <= 1 and 0 < q <= 1");
  }
  if (!mc.is_stationary_start(1e-12)) throw std::invalid_argument("Markov latency PMFs assume p0 = p / (p + q)");
}

double finish(LatencyPmf& pmf) {
  CompensatedSum s;
  for (const double m : pmf.masses) s.add(m);
  pmf.truncation_mass = std::max(0.0, 1.0 - s.value());
  return pmf.truncation_mass;
}

// P(k waiting slots) = C(n+k-2, k) (1-p)^k p^(n-1).
double er_wait_mass(int n, double p, int k) {
  return std::exp(log_binomial(n + k - 2, k) + xlogy(k, 1.0 - p) + xlogy(n - 1, p));
}

// Sum over m >= 1 waiting edges of C(n-1, m) C(w-1, m-1) p^(n-1) q^m (1-p)^(w-m) / (p+q)^(n-1),
// where w >= 1 is the total number of waiting slots.
double markov_wait_mass(int n, const MarkovParams& mc, int w) {
  const double base = xlogy(n - 1, mc.p) - xlogy(n - 1, mc.p + mc.q);
  CompensatedSum s;
  for (int m = 1; m <= std::min(n - 1, w); ++m) {
    s.add(std::exp(log_binomial(n - 1, m) + log_binomial(w - 1, m - 1) + base + xlogy(m, mc.q) +
                   xlogy(w - m, 1.0 - mc.p)));
  }
  return s.value();
}

}  // namespace

double LatencyPmf::at(int latency) const noexcept {
  if (latency < offset || latency > max_latency()) return 0.0;
  return masses[static_cast<std::size_t>(latency - offset)];
}

double LocationPmf::mean() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) m += static_cast<double>(k) * masses[k];
  return m;
}

LocationPmf er_soa_location_pmf(int n, double p, int t) {
  require_line(n);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  std::vector<double> cur(static_cast<std::size_t>(n), 0.0);
  cur[0] = 1.0;
  for (int step = 0; step < t; ++step) {
    std::vector<double> next(cur.size(), 0.0);
    for (int k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (k == n - 1) {
        next[ku] += cur[ku];  // delivered packets stay put
      } else {
        next[ku] += cur[ku] * (1.0 - p);
        next[ku + 1] += cur[ku] * p;
      }
    }
    cur = std::move(next);
  }
  return {t, std::move(cur)};
}

LatencyPmf er_soa_latency_pmf(int n, double p, int max_latency) {
  require_line(n);
  require_er(p);
  LatencyPmf pmf{n - 1, {}, 0.0};
  for (int j = 0; n - 1 + j <= max_latency; ++j) pmf.masses.push_back(er_wait_mass(n, p, j));
  finish(pmf);
  return pmf;
}

LatencyPmf er_cut_latency_pmf(int n, double p, int max_latency) {
  require_line(n);
  require_er(p);
  LatencyPmf pmf{0, {}, 0.0};
  for (int k = 0; k <= max_latency; ++k) pmf.masses.push_back(er_wait_mass(n, p, k));
  finish(pmf);
  return pmf;
}

LatencyPmf mc_cut_latency_pmf(int n, const MarkovParams& mc, int max_latency) {
  require_line(n);
  require_markov(mc);
  LatencyPmf pmf{0, {}, 0.0};
  const double on = mc.p / (mc.p + mc.q);
  // No waiting at all: every edge ON in slot 1.
  if (max_latency >= 0) pmf.masses.push_back(pow0(on, n - 1));
  for (int w = 1; w <= max_latency; ++w) pmf.masses.push_back(markov_wait_mass(n, mc, w));
  finish(pmf);
  return pmf;
}

LatencyPmf mc_soa_latency_pmf(int n, const MarkovParams& mc, int max_latency) {
  require_line(n);
  require_markov(mc);
  LatencyPmf pmf{n - 1, {}, 0.0};
  const double on = mc.p / (mc.p + mc.q);
  // The diagonal path: edge i ON when the packet reaches node i.
  if (max_latency >= n - 1) pmf.masses.push_back(pow0(on, n - 1));
  for (int w = 1; n - 1 + w <= max_latency; ++w) pmf.masses.push_back(markov_wait_mass(n, mc, w));
  finish(pmf);
  return pmf;
}

LatencyPmf pmf_until_tail(const std::function<LatencyPmf(int)>& make, double tail, int initial) {
  if (!(tail > 0.0)) throw std::invalid_argument("tail tolerance must be positive");
  constexpr int kMaxHorizon = 1 << 22;
  for (int h = std::max(1, initial); h <= kMaxHorizon; h *= 2) {
    auto pmf = make(h);
    if (pmf.truncation_mass < tail) return pmf;
  }
  throw std::runtime_error("tail mass did not fall below tolerance within horizon " + std::to_string(kMaxHorizon));
}

LatencyPmf line_latency_pmf(int n, const EdgeModel& model, Metric metric, double tail) {
  const bool soa = metric == Metric::store_or_advance;
  if (const auto* er = std::get_if<ErParams>(&model)) {
    const double p = er->p;
    return pmf_until_tail(
        [&](int h) { return soa ? er_soa_latency_pmf(n, p, h) : er_cut_latency_pmf(n, p, h); }, tail, 2 * n);
  }
  const auto mc = std::get<MarkovParams>(model);
  return pmf_until_tail(
      [&](int h) { return soa ? mc_soa_latency_pmf(n, mc, h) : mc_cut_latency_pmf(n, mc, h); }, tail, 2 * n);
}

Moments pmf_moments(const LatencyPmf& pmf) {
  CompensatedSum first;
  for (std::size_t i = 0; i < pmf.masses.size(); ++i) {
    first.add(static_cast<double>(pmf.offset + static_cast<int>(i)) * pmf.masses[i]);
  }
  const double mean = first.value();
  CompensatedSum second;
  for (std::size_t i = 0; i < pmf.masses.size(); ++i) {
    const double d = static_cast<double>(pmf.offset + static_cast<int>(i)) - mean;
    second.add(d * d * pmf.masses[i]);
  }
  return {mean, second.value(), pmf.truncation_mass};
}

namespace {

// Reach probability after `blocks` full blocks of m slots; each block is ON with
// probability 1 - (1-p)^m. Written so every representation shares the tau = 0 term.
double full_block_cdf(int n, double p, int blocks, int m) {
  const double block_on = 1.0 - pow0(1.0 - p, m);
  const double all_on = pow0(block_on, n - 1);
  if (n == 2) return 1.0 - pow0(1.0 - p, static_cast<long long>(m) * blocks);
  CompensatedSum s;
  s.add(all_on);
  for (int tau = 1; tau <= blocks - 1; ++tau) {
    s.add(std::exp(log_binomial(n + tau - 2, tau) + xlogy(static_cast<long long>(m) * tau, 1.0 - p)) * all_on);
  }
  return std::min(1.0, s.value());
}

}  // namespace

double stacked_reach_cdf(int n, double p, int t) {
  require_line(n);
  require_er(p);
  if (t <= 0) return 0.0;
  return full_block_cdf(n, p, t, 1);
}

double smashed_reach_cdf(int n, double p, int t) {
  require_line(n);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (t <= 0) return 0.0;
  return pow0(1.0 - pow0(1.0 - p, t), n - 1);
}

double m_smashed_reach_cdf(int n, double p, int t, int m) {
  require_line(n);
  require_er(p);
  if (m < 1) throw std::invalid_argument("smash granularity m must be >= 1");
  if (t <= 0) return 0.0;
  // A single block is the fully smashed graph of those t slots.
  if (t <= m) return smashed_reach_cdf(n, p, t);
  if (t % m == 0) return full_block_cdf(n, p, t / m, m);
  std::vector<double> probs(static_cast<std::size_t>(t / m), 1.0 - pow0(1.0 - p, m));
  probs.push_back(1.0 - pow0(1.0 - p, t % m));
  return line_block_reach_probability(n, probs);
}

double mc_smashed_reach_cdf(int n, const MarkovParams& mc, int t) {
  require_line(n);
  const auto pi = stationary_distribution(mc);
  if (!mc.is_stationary_start(1e-12)) throw std::invalid_argument("smashed Markov CDF assumes p0 = p / (p + q)");
  if (t <= 0) return 0.0;
  return pow0(1.0 - pi.off * pow0(1.0 - mc.p, t - 1), n - 1);
}

double line_block_reach_probability(int n, std::span<const double> block_on) {
  require_line(n);
  const auto edges = static_cast<std::size_t>(n - 1);
  // dist[j]: probability that exactly j edges have been crossed so far.
  std::vector<double> dist(edges + 1, 0.0);
  dist[0] = 1.0;
  for (const double s : block_on) {
    std::vector<double> next(edges + 1, 0.0);
    next[edges] = dist[edges];
    for (std::size_t j = 0; j < edges; ++j) {
      if (dist[j] == 0.0) continue;
      double run = dist[j];
      for (std::size_t a = j; a < edges; ++a) {
        next[a] += run * (1.0 - s);
        run *= s;
      }
      next[edges] += run;
    }
    dist = std::move(next);
  }
  return dist[edges];
}

}  // namespace tvg
