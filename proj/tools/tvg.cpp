// tvg: latency distributions, forwarding simulation, representation
// comparison and adaptive routing on time-varying graphs.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tvg/dyn_models.hpp"
#include "tvg/latency.hpp"
#include "tvg/routing.hpp"
#include "tvg/simulator.hpp"
#include "tvg/tgs_io.hpp"

namespace {

using nlohmann::json;
using namespace tvg;

constexpr const char* kSpecVersion = "1.0";

struct RunConfig {
  std::string model{"er"};
  std::string model_spec;
  int n{10};
  double p{0.25};
  double q{0.5};
  std::string p0{"stationary"};
  std::string gu{"line"};
  std::string graph;
  std::string metric{"soa"};
  int horizon{0};
  std::uint64_t trials{0};
  std::uint64_t seed{1};
  std::vector<std::string> m{"1", "2", "5", "all"};
  std::optional<int> location;
  std::optional<NodeId> source;
  std::optional<NodeId> dest;
  std::string output;
  std::string summary;
  std::string format{"csv"};
  bool serial{false};
  bool empirical{false};
  bool underlying{false};
};

std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string prob(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

ModelSpec model_of(const RunConfig& c) {
  if (!c.model_spec.empty()) return parse_model_spec(c.model_spec);
  std::string text = c.model + " p=" + number(c.p);
  if (c.model == "mc") text += " q=" + number(c.q) + " p0=" + c.p0;
  if (!c.graph.empty()) {
    text += " gu=file:" + c.graph;
  } else {
    text += " gu=" + c.gu + " n=" + std::to_string(c.n);
  }
  return parse_model_spec(text);
}

Metric metric_of(const RunConfig& c) {
  if (c.metric == "soa") return Metric::store_or_advance;
  if (c.metric == "cut") return Metric::cut_through;
  throw std::invalid_argument("metric must be soa or cut");
}

Execution execution_of(const RunConfig& c) { return c.serial ? Execution::serial : Execution::parallel; }

void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << data;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path);
}

// A stationary chain with p + q = 1 draws every slot independently.
EdgeModel memoryless_form(const EdgeModel& model) {
  if (const auto* mc = std::get_if<MarkovParams>(&model)) {
    if (std::abs(mc->p + mc->q - 1.0) < 1e-15 && mc->is_stationary_start(1e-15)) return ErParams{mc->p};
  }
  return model;
}

void require_line(const ModelSpec& spec, const char* what) {
  if (spec.gu != "line") throw std::invalid_argument(std::string(what) + " needs gu=line");
}

// Analytic latency PMF for line(n) routed end to end, when one exists.
std::optional<LatencyPmf> analytic_pmf(const ModelSpec& spec, NodeId source, NodeId dest, Metric metric) {
  if (spec.gu != "line" || source != 0 || dest != static_cast<NodeId>(spec.n - 1)) return std::nullopt;
  if (const auto* mc = std::get_if<MarkovParams>(&spec.model)) {
    if (mc->p <= 0.0 || mc->q <= 0.0 || !mc->is_stationary_start(1e-12)) return std::nullopt;
  } else if (std::get<ErParams>(spec.model).p <= 0.0) {
    return std::nullopt;
  }
  return line_latency_pmf(spec.n, spec.model, metric);
}

json moments_json(const Moments& m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"truncation_mass", m.truncation_mass}};
}

json empirical_json(const EmpiricalPmf& emp) {
  json j = {{"trials", emp.trials}, {"delivered", emp.delivered()}, {"undelivered", emp.undelivered}};
  if (emp.delivered() > 0) {
    j["mean"] = emp.mean();
    j["stderr"] = emp.standard_error();
  } else {
    j["mean"] = nullptr;
    j["stderr"] = nullptr;
  }
  return j;
}

std::string empirical_csv(const EmpiricalPmf& emp) {
  std::ostringstream s;
  s << "latency,count,probability\n";
  std::size_t first = 0;
  while (first < emp.counts.size() && emp.counts[first] == 0) ++first;
  for (std::size_t l = first; l < emp.counts.size(); ++l) {
    s << l << ',' << emp.counts[l] << ',' << prob(emp.probability(static_cast<int>(l))) << '\n';
  }
  return s.str();
}

json empirical_rows(const EmpiricalPmf& emp) {
  json rows = json::array();
  for (std::size_t l = 0; l < emp.counts.size(); ++l) {
    if (emp.counts[l] > 0) rows.push_back({{"latency", l}, {"count", emp.counts[l]}});
  }
  return rows;
}

void cmd_pmf(const RunConfig& c) {
  const auto spec = model_of(c);
  require_line(spec, "pmf");
  const auto metric = metric_of(c);
  const int n = spec.n;
  const auto model = memoryless_form(spec.model);

  if (c.location) {
    const auto* er = std::get_if<ErParams>(&model);
    if (!er) throw std::invalid_argument("--location is available for the er model only");
    if (metric != Metric::store_or_advance) throw std::invalid_argument("--location is defined for --metric soa");
    const auto loc = er_soa_location_pmf(n, er->p, *c.location);
    if (c.format == "json") {
      json j = {{"spec_version", kSpecVersion}, {"command", "pmf"}, {"model", format_model_spec(spec)},
                {"metric", c.metric}, {"t", loc.time}, {"mean_location", loc.mean()}, {"probability", loc.masses}};
      emit(c.output, j.dump(2) + "\n");
    } else {
      std::ostringstream s;
      s << "node,probability\n";
      for (std::size_t k = 0; k < loc.masses.size(); ++k) s << k << ',' << prob(loc.masses[k]) << '\n';
      emit(c.output, s.str());
    }
    return;
  }

  LatencyPmf pmf;
  if (c.horizon > 0) {
    const bool soa = metric == Metric::store_or_advance;
    if (const auto* er = std::get_if<ErParams>(&model)) {
      pmf = soa ? er_soa_latency_pmf(n, er->p, c.horizon) : er_cut_latency_pmf(n, er->p, c.horizon);
    } else {
      const auto& mc = std::get<MarkovParams>(model);
      pmf = soa ? mc_soa_latency_pmf(n, mc, c.horizon) : mc_cut_latency_pmf(n, mc, c.horizon);
    }
  } else {
    pmf = line_latency_pmf(n, model, metric);
  }
  auto last = pmf.masses.size();
  while (last > 1 && pmf.masses[last - 1] == 0.0) --last;

  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < last; ++i) rows.push_back({{"t", pmf.offset + static_cast<int>(i)}, {"probability", pmf.masses[i]}});
    json j = {{"spec_version", kSpecVersion}, {"command", "pmf"}, {"model", format_model_spec(spec)},
              {"metric", c.metric}, {"moments", moments_json(pmf_moments(pmf))}, {"pmf", rows}};
    emit(c.output, j.dump(2) + "\n");
    return;
  }
  std::ostringstream s;
  s << "t,probability\n";
  for (std::size_t i = 0; i < last; ++i) s << pmf.offset + static_cast<int>(i) << ',' << prob(pmf.masses[i]) << '\n';
  emit(c.output, s.str());
}

void cmd_simulate(const RunConfig& c) {
  if (c.trials == 0) throw std::invalid_argument("--trials must be positive");
  const auto spec = model_of(c);
  const auto gu = build_underlying(spec);
  const auto metric = metric_of(c);
  const NodeId source = c.source.value_or(gu.nodes().front());
  const NodeId dest = c.dest.value_or(gu.nodes().back());
  SimulationSetup setup{spec.model, gu, source, dest, c.horizon, c.trials, c.seed};
  const auto emp = metric == Metric::store_or_advance ? simulate_soa(setup, {}, execution_of(c))
                                                      : simulate_cut(setup, {}, execution_of(c));

  json summary = {{"spec_version", kSpecVersion},
                  {"command", "simulate"},
                  {"model", format_model_spec(spec)},
                  {"metric", c.metric},
                  {"source", source},
                  {"dest", dest},
                  {"horizon", c.horizon > 0 ? c.horizon : default_horizon(spec.model, gu.node_count())},
                  {"seed", c.seed},
                  {"empirical", empirical_json(emp)}};
  if (const auto pmf = analytic_pmf(spec, source, dest, metric)) {
    summary["analytic"] = moments_json(pmf_moments(*pmf));
    summary["tv_distance"] = total_variation(emp, *pmf);
  } else {
    summary["analytic"] = nullptr;
    summary["tv_distance"] = nullptr;
  }

  if (c.format == "json") {
    summary["pmf"] = empirical_rows(emp);
    emit(c.output, summary.dump(2) + "\n");
  } else {
    emit(c.output, empirical_csv(emp));
    if (!c.summary.empty()) emit(c.summary, summary.dump(2) + "\n");
  }
}

std::vector<int> smash_levels(const std::vector<std::string>& ms) {
  std::vector<int> out;
  for (const auto& m : ms) {
    if (m == "all") continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), v);
    if (ec != std::errc{} || ptr != m.data() + m.size() || v < 1) {
      throw std::invalid_argument("--m values must be positive integers or 'all', got '" + m + "'");
    }
    out.push_back(v);
  }
  return out;
}

void cmd_compare(const RunConfig& c) {
  const auto spec = model_of(c);
  const int max_t = c.horizon > 0 ? c.horizon : 100;
  const bool analytic = spec.gu == "line" && !c.empirical;

  if (!analytic) {
    if (c.trials == 0) throw std::invalid_argument("empirical comparison needs --trials > 0");
    const auto gu = build_underlying(spec);
    const auto curves = empirical_reachable_pairs(spec.model, gu, max_t, c.trials, c.seed, execution_of(c));
    if (c.format == "json") {
      json rows = json::array();
      for (const auto& pt : curves.points) {
        rows.push_back({{"T", pt.horizon},
                        {"stacked", pt.stacked_mean},
                        {"stacked_stderr", pt.stacked_stderr},
                        {"smashed", pt.smashed_mean},
                        {"smashed_stderr", pt.smashed_stderr}});
      }
      json j = {{"spec_version", kSpecVersion}, {"command", "compare"}, {"model", format_model_spec(spec)},
                {"trials", c.trials}, {"seed", c.seed}, {"pointwise_violations", curves.pointwise_violations},
                {"curves", rows}};
      emit(c.output, j.dump(2) + "\n");
      return;
    }
    std::ostringstream s;
    s << "T,stacked,stacked_stderr,smashed,smashed_stderr\n";
    for (const auto& pt : curves.points) {
      s << pt.horizon << ',' << prob(pt.stacked_mean) << ',' << prob(pt.stacked_stderr) << ','
        << prob(pt.smashed_mean) << ',' << prob(pt.smashed_stderr) << '\n';
    }
    emit(c.output, s.str());
    return;
  }

  const int n = spec.n;
  const auto levels = smash_levels(c.m);
  std::vector<std::string> header{"t", "stacked"};
  for (const int m : levels) header.push_back("m" + std::to_string(m));
  header.push_back("smashed");

  std::vector<std::vector<double>> table;
  if (const auto* er = std::get_if<ErParams>(&spec.model)) {
    for (int t = 1; t <= max_t; ++t) {
      std::vector<double> row{stacked_reach_cdf(n, er->p, t)};
      for (const int m : levels) row.push_back(m_smashed_reach_cdf(n, er->p, t, m));
      row.push_back(smashed_reach_cdf(n, er->p, t));
      table.push_back(std::move(row));
    }
  } else {
    const auto& mc = std::get<MarkovParams>(spec.model);
    for (const int m : levels) {
      if (m != 1) throw std::invalid_argument("m-smashed curves for the mc model need --empirical");
    }
    const auto cut = mc_cut_latency_pmf(n, mc, max_t);
    double cdf = 0.0;
    for (int t = 1; t <= max_t; ++t) {
      cdf += cut.at(t - 1);
      std::vector<double> row{cdf};
      for (std::size_t i = 0; i < levels.size(); ++i) row.push_back(cdf);
      row.push_back(mc_smashed_reach_cdf(n, mc, t));
      table.push_back(std::move(row));
    }
  }

  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < table.size(); ++i) {
      json row = {{"t", static_cast<int>(i) + 1}};
      for (std::size_t k = 0; k < table[i].size(); ++k) row[header[k + 1]] = table[i][k];
      rows.push_back(row);
    }
    json j = {{"spec_version", kSpecVersion}, {"command", "compare"}, {"model", format_model_spec(spec)}, {"cdf", rows}};
    emit(c.output, j.dump(2) + "\n");
    return;
  }
  std::ostringstream s;
  for (std::size_t k = 0; k < header.size(); ++k) s << (k ? "," : "") << header[k];
  s << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    s << i + 1;
    for (const double v : table[i]) s << ',' << prob(v);
    s << '\n';
  }
  emit(c.output, s.str());
}

void cmd_route(const RunConfig& c) {
  if (c.model != "er" || (!c.model_spec.empty() && c.model_spec.rfind("er", 0) != 0)) {
    throw std::invalid_argument("routing is defined for the er model only");
  }
  const auto spec = model_of(c);
  const auto gu = build_underlying(spec);
  const double p = std::get<ErParams>(spec.model).p;
  const auto metric = metric_of(c);
  const NodeId source = c.source.value_or(gu.nodes().front());
  const NodeId dest = c.dest.value_or(gu.nodes().back());
  if (!gu.contains(source)) throw std::invalid_argument("source " + std::to_string(source) + " not in graph");

  const auto table = metric == Metric::store_or_advance ? compute_mett(gu, p, dest) : cut_mett_small(gu, p, dest);
  const double mett_source = table.at(source);
  if (!std::isfinite(mett_source)) {
    throw std::invalid_argument("METT of source " + std::to_string(source) + " is infinite: dest " +
                                std::to_string(dest) + " is unreachable in the underlying graph");
  }

  json j = {{"spec_version", kSpecVersion}, {"command", "route"}, {"model", format_model_spec(spec)},
            {"metric", c.metric},           {"source", source},   {"dest", dest},
            {"mett_source", mett_source},   {"table", mett_to_json(table)}};
  if (c.trials > 0) {
    SimulationSetup setup{spec.model, gu, source, dest, c.horizon, c.trials, c.seed};
    const auto emp = metric == Metric::store_or_advance
                         ? simulate_soa(setup, adaptive_policy(table), execution_of(c))
                         : simulate_cut(setup, mett_cut_policy(table), execution_of(c));
    auto sim = empirical_json(emp);
    sim["seed"] = c.seed;
    if (emp.delivered() > 1 && emp.standard_error() > 0.0) {
      sim["z_score"] = (emp.mean() - mett_source) / emp.standard_error();
    }
    sim["pmf"] = empirical_rows(emp);
    j["simulation"] = sim;
  }
  emit(c.output, j.dump(2) + "\n");
}

void cmd_gen(const RunConfig& c) {
  const auto spec = model_of(c);
  const auto gu = build_underlying(spec);
  std::ostringstream s;
  if (c.underlying) {
    std::vector<Graphlet> slots{Graphlet(1, {gu.nodes().begin(), gu.nodes().end()}, {gu.edges().begin(), gu.edges().end()})};
    write_tgs(s, Tgs(std::move(slots)));
  } else {
    if (c.horizon < 1) throw std::invalid_argument("gen needs --horizon >= 1");
    write_tgs(s, sample_tgs(gu, spec.model, c.horizon, c.seed));
  }
  emit(c.output, s.str());
}

void add_model_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--model", c.model, "Edge process")->check(CLI::IsMember({"er", "mc"}))->capture_default_str();
  cmd->add_option("--model-spec", c.model_spec,
                  "Full model text, e.g. \"mc p=0.5 q=0.25 p0=stationary gu=line n=6\"; overrides the model flags");
  cmd->add_option("--n", c.n, "Number of nodes")->capture_default_str();
  cmd->add_option("--p", c.p, "ER edge probability, or Markov OFF->ON probability")->capture_default_str();
  cmd->add_option("--q", c.q, "Markov ON->OFF probability")->capture_default_str();
  cmd->add_option("--p0", c.p0, "Markov initial ON probability or 'stationary'")->capture_default_str();
  cmd->add_option("--gu", c.gu, "Underlying graph")->check(CLI::IsMember({"line", "complete"}))->capture_default_str();
  cmd->add_option("--graph", c.graph, "Underlying graph file (single-slot TGS); overrides --gu and --n");
}

void add_output_flags(CLI::App* cmd, RunConfig& c, bool formats) {
  cmd->add_option("--output", c.output, "Output file (default standard output)");
  if (formats) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latency, reachability and routing on time-varying graphs"};
  app.require_subcommand(1);

  RunConfig pmf_cfg, sim_cfg, cmp_cfg, route_cfg, gen_cfg;
  sim_cfg.trials = 100000;
  cmp_cfg.trials = 1000;
  cmp_cfg.p = 0.1;

  auto* pmf = app.add_subcommand("pmf", "Analytic latency PMF on a line");
  add_model_flags(pmf, pmf_cfg);
  pmf->add_option("--metric", pmf_cfg.metric, "Forwarding metric")->check(CLI::IsMember({"soa", "cut"}))->capture_default_str();
  pmf->add_option("--horizon", pmf_cfg.horizon, "Largest latency listed (0: until tail mass < 1e-12)")->capture_default_str();
  pmf->add_option("--location,--t", pmf_cfg.location, "Emit the packet-location PMF after this many slots");
  add_output_flags(pmf, pmf_cfg, true);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo latency PMF");
  add_model_flags(sim, sim_cfg);
  sim->add_option("--metric", sim_cfg.metric, "Forwarding metric")->check(CLI::IsMember({"soa", "cut"}))->capture_default_str();
  sim->add_option("--horizon", sim_cfg.horizon, "Slots per trial (0: 20 (n-1) / p_on)")->capture_default_str();
  sim->add_option("--trials", sim_cfg.trials, "Trials")->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "Seed")->capture_default_str();
  sim->add_option("--source", sim_cfg.source, "Source node (default lowest id)");
  sim->add_option("--dest", sim_cfg.dest, "Destination node (default highest id)");
  sim->add_option("--summary", sim_cfg.summary, "Also write the JSON summary here (csv format)");
  sim->add_flag("--serial", sim_cfg.serial, "Run the serial reference kernel");
  add_output_flags(sim, sim_cfg, true);

  auto* cmp = app.add_subcommand("compare", "Reachability of stacked, m-smashed and smashed representations");
  add_model_flags(cmp, cmp_cfg);
  cmp->add_option("--m", cmp_cfg.m, "Smash granularities; 'all' is the fully smashed graph")->capture_default_str();
  cmp->add_option("--horizon", cmp_cfg.horizon, "Largest t (0: 100)")->capture_default_str();
  cmp->add_option("--trials", cmp_cfg.trials, "Trials for empirical curves")->capture_default_str();
  cmp->add_option("--seed", cmp_cfg.seed, "Seed")->capture_default_str();
  cmp->add_flag("--empirical", cmp_cfg.empirical, "Sample reachable-pair fractions even on a line");
  cmp->add_flag("--serial", cmp_cfg.serial, "Run the serial reference kernel");
  add_output_flags(cmp, cmp_cfg, true);

  auto* route = app.add_subcommand("route", "Minimum expected traversal times and adaptive routing");
  add_model_flags(route, route_cfg);
  route->add_option("--metric", route_cfg.metric, "Forwarding metric")->check(CLI::IsMember({"soa", "cut"}))->capture_default_str();
  route->add_option("--source", route_cfg.source, "Source node (default lowest id)");
  route->add_option("--dest", route_cfg.dest, "Destination node (default highest id)");
  route->add_option("--trials", route_cfg.trials, "Simulated trials of the adaptive policy")->capture_default_str();
  route->add_option("--seed", route_cfg.seed, "Seed")->capture_default_str();
  route->add_option("--horizon", route_cfg.horizon, "Slots per trial (0: 20 (n-1) / p)")->capture_default_str();
  route->add_flag("--serial", route_cfg.serial, "Run the serial reference kernel");
  add_output_flags(route, route_cfg, false);

  auto* gen = app.add_subcommand("gen", "Sample a graphlet sequence, or write the underlying graph");
  add_model_flags(gen, gen_cfg);
  gen->add_option("--horizon", gen_cfg.horizon, "Number of slots")->capture_default_str();
  gen->add_option("--seed", gen_cfg.seed, "Seed")->capture_default_str();
  gen->add_flag("--underlying", gen_cfg.underlying, "Write the underlying graph as a single-slot TGS");
  add_output_flags(gen, gen_cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (pmf->parsed()) cmd_pmf(pmf_cfg);
    if (sim->parsed()) cmd_simulate(sim_cfg);
    if (cmp->parsed()) cmd_compare(cmp_cfg);
    if (route->parsed()) cmd_route(route_cfg);
    if (gen->parsed()) cmd_gen(gen_cfg);
  } catch (const std::exception& e) {
    std::cerr << "tvg: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
