#include "tvg/tgs_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace tvg {

namespace {

long long read_int(std::istringstream& ss, int line, const char* what) {
  long long v = 0;
  if (!(ss >> v)) throw ParseError(line, std::string("expected integer ") + what);
  return v;
}

void expect_end(std::istringstream& ss, int line) {
  std::string rest;
  if (ss >> rest) throw ParseError(line, "trailing token '" + rest + "'");
}

}  // namespace

Tgs read_tgs(std::istream& in) {
  std::optional<long long> n;
  long long horizon = 0;
  int current = 0;
  std::vector<std::set<Edge>> slots;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ss(raw);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "tgs") {
      if (n) throw ParseError(line, "duplicate header");
      n = read_int(ss, line, "n");
      horizon = read_int(ss, line, "T");
      expect_end(ss, line);
      if (*n < 1) throw ParseError(line, "n must be >= 1");
      if (*n > 1'000'000) throw ParseError(line, "n above 1000000");
      if (horizon < 1) throw ParseError(line, "T must be >= 1");
      if (horizon > 1'000'000) throw ParseError(line, "T above 1000000");
      slots.assign(static_cast<std::size_t>(horizon), {});
      continue;
    }
    if (!n) throw ParseError(line, "missing 'tgs <n> <T>' header");
    if (tag == "t") {
      const auto s = read_int(ss, line, "slot");
      expect_end(ss, line);
      if (s < 1 || s > horizon) throw ParseError(line, "slot " + std::to_string(s) + " outside [1, T]");
      current = static_cast<int>(s);
    } else if (tag == "e") {
      if (current == 0) throw ParseError(line, "edge before any 't <slot>' line");
      const auto u = read_int(ss, line, "u");
      const auto v = read_int(ss, line, "v");
      expect_end(ss, line);
      if (u < 0 || v < 0 || u >= *n || v >= *n) throw ParseError(line, "node id outside [0, n)");
      if (u == v) throw ParseError(line, "self-loop");
      const auto e = make_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
      if (!slots[static_cast<std::size_t>(current - 1)].insert(e).second) {
        throw ParseError(line, "duplicate edge in slot " + std::to_string(current));
      }
    } else {
      throw ParseError(line, "unknown record '" + tag + "'");
    }
  }
  if (!n) throw ParseError(line, "empty input");
  std::vector<std::vector<Edge>> edges;
  for (const auto& s : slots) edges.emplace_back(s.begin(), s.end());
  return Tgs::uniform(static_cast<NodeId>(*n), edges);
}

Tgs read_tgs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_tgs(in);
}

void write_tgs(std::ostream& out, const Tgs& tgs) {
  const auto u = tgs.node_universe();
  const NodeId n = u.empty() ? 0 : u.back() + 1;
  for (const auto& g : tgs.graphlets()) {
    if (g.nodes().size() != n) throw std::invalid_argument("the text format needs nodes 0..n-1 in every slot");
  }
  out << "tgs " << n << ' ' << tgs.horizon() << '\n';
  for (const auto& g : tgs.graphlets()) {
    out << "t " << g.time() << '\n';
    for (const auto& e : g.edges()) out << "e " << e.u << ' ' << e.v << '\n';
  }
}

}  // namespace tvg
