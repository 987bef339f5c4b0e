#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tvg/dyn_models.hpp"
#include "tvg/tgs_io.hpp"

namespace tvg {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ModelSpec parse_model_spec(std::string_view text) {
  std::istringstream ss{std::string(text)};
  std::string kind;
  if (!(ss >> kind)) throw std::invalid_argument("empty model spec");
  if (kind != "er" && kind != "mc") throw std::invalid_argument("model must be 'er' or 'mc', got '" + kind + "'");

  std::map<std::string, std::string> kv;
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + tok + "'");
    if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
      throw std::invalid_argument("duplicate key '" + tok.substr(0, eq) + "'");
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  ModelSpec spec;
  const auto p = take("p");
  if (!p) throw std::invalid_argument("model spec needs p=");
  if (kind == "er") {
    spec.model = ErParams{parse_double("p", *p)};
  } else {
    const auto q = take("q");
    if (!q) throw std::invalid_argument("mc model spec needs q=");
    const double pv = parse_double("p", *p);
    const double qv = parse_double("q", *q);
    const auto p0 = take("p0").value_or("stationary");
    spec.model = p0 == "stationary" ? MarkovParams::stationary(pv, qv) : MarkovParams{pv, qv, parse_double("p0", p0)};
  }
  validate(spec.model);

  spec.gu = take("gu").value_or("line");
  if (spec.gu != "line" && spec.gu != "complete" && spec.gu.rfind("file:", 0) != 0) {
    throw std::invalid_argument("gu must be line, complete or file:PATH");
  }
  if (const auto n = take("n")) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(n->data(), n->data() + n->size(), v);
    if (ec != std::errc{} || ptr != n->data() + n->size()) throw std::invalid_argument("bad value for n: '" + *n + "'");
    spec.n = v;
  } else if (spec.gu.rfind("file:", 0) != 0) {
    throw std::invalid_argument("model spec needs n=");
  }
  if (!kv.empty()) throw std::invalid_argument("unknown key '" + kv.begin()->first + "'");
  return spec;
}

std::string format_model_spec(const ModelSpec& spec) {
  std::string out;
  if (const auto* er = std::get_if<ErParams>(&spec.model)) {
    out = "er p=" + format_double(er->p);
  } else {
    const auto& mc = std::get<MarkovParams>(spec.model);
    out = "mc p=" + format_double(mc.p) + " q=" + format_double(mc.q) +
          " p0=" + (mc.is_stationary_start(0.0) ? std::string("stationary") : format_double(mc.p0));
  }
  out += " gu=" + spec.gu;
  if (spec.n > 0) out += " n=" + std::to_string(spec.n);
  return out;
}

UnderlyingGraph build_underlying(const ModelSpec& spec) {
  if (spec.gu == "line") return UnderlyingGraph::line(static_cast<NodeId>(spec.n));
  if (spec.gu == "complete") return UnderlyingGraph::complete(static_cast<NodeId>(spec.n));
  if (spec.gu.rfind("file:", 0) == 0) {
    auto g = UnderlyingGraph::from_tgs(read_tgs_file(spec.gu.substr(5)));
    if (spec.n > 0 && g.node_count() != static_cast<std::size_t>(spec.n)) {
      throw std::invalid_argument("n does not match the graph file");
    }
    return g;
  }
  throw std::invalid_argument("unknown underlying graph '" + spec.gu + "'");
}

}  // namespace tvg
