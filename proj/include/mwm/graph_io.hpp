// mwm/graph_io.hpp -- line-oriented text formats.
//
// Graph file:   header `p bip <n_u> <n_v> <m>`, then exactly m lines
//               `e <u> <v> <w>`. `#`-prefixed comment lines and blank lines
//               are allowed anywhere; tokens are whitespace-separated.
// Ops script:   `del <u-index>` or `add <v-label> <u1> <w1> <u2> <w2> ...`
//               with w1 >= w2 >= ...; same comment rules.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "mwm/graph.hpp"

namespace mwm {

class parse_error : public std::runtime_error {
 public:
  parse_error(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct DeleteU {
  int u = -1;
  int line = 0;
};

struct InsertV {
  std::string label;
  std::vector<std::pair<int, double>> edges;  // (u, w), non-increasing in w
  int line = 0;
};

using DynOp = std::variant<DeleteU, InsertV>;

struct OpsScript {
  std::vector<DynOp> ops;
};

namespace iodetail {

inline std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline long parse_int(const std::string& tok, int line, const char* what) {
  long value = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw parse_error(line, std::string("malformed ") + what + " '" + tok + "'");
  return value;
}

inline double parse_weight(const std::string& tok, int line) {
  char* end = nullptr;
  const double w = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw parse_error(line, "malformed weight '" + tok + "'");
  if (!std::isfinite(w)) throw parse_error(line, "weight must be finite");
  return w;
}

}  // namespace iodetail

inline BipartiteGraph parse_graph(std::istream& in) {
  using namespace iodetail;
  int lineno = 0;
  std::string line;

  auto next_tokens = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      toks = tokens_of(line);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_tokens(toks)) throw parse_error(lineno, "missing header 'p bip <n_u> <n_v> <m>'");
  if (toks.size() != 5 || toks[0] != "p" || toks[1] != "bip")
    throw parse_error(lineno, "malformed header, expected 'p bip <n_u> <n_v> <m>'");
  const long n_u = parse_int(toks[2], lineno, "n_u");
  const long n_v = parse_int(toks[3], lineno, "n_v");
  const long m = parse_int(toks[4], lineno, "m");
  if (n_u < 0 || n_v < 0 || m < 0) throw parse_error(lineno, "header counts must be non-negative");
  if (n_u > 100000000 || n_v > 100000000) throw parse_error(lineno, "vertex count exceeds supported range");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(m) * 2);
  for (long i = 0; i < m; ++i) {
    if (!next_tokens(toks)) throw parse_error(lineno, "expected " + std::to_string(m) + " edge lines, got " + std::to_string(i));
    if (toks.size() != 4 || toks[0] != "e") throw parse_error(lineno, "malformed edge line, expected 'e <u> <v> <w>'");
    const long u = parse_int(toks[1], lineno, "u-index");
    const long v = parse_int(toks[2], lineno, "v-index");
    const double w = parse_weight(toks[3], lineno);
    if (u < 0 || u >= n_u) throw parse_error(lineno, "u-index " + std::to_string(u) + " out of range [0," + std::to_string(n_u) + ")");
    if (v < 0 || v >= n_v) throw parse_error(lineno, "v-index " + std::to_string(v) + " out of range [0," + std::to_string(n_v) + ")");
    if (w < 0.0) throw parse_error(lineno, "negative weight");
    if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v)).second)
      throw parse_error(lineno, "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    edges.push_back(Edge{static_cast<int>(u), static_cast<int>(v), w});
  }
  if (next_tokens(toks)) throw parse_error(lineno, "unexpected content after " + std::to_string(m) + " edges");
  return BipartiteGraph(static_cast<int>(n_u), static_cast<int>(n_v), std::move(edges));
}

inline BipartiteGraph parse_graph(const std::string& text) {
  std::istringstream is(text);
  return parse_graph(is);
}

// Shortest round-trip representation; parse_graph(write_graph(g))
// reproduces g edge-for-edge, weights bit-exact.
inline std::string format_weight(double w) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, w);
  (void)ec;
  return std::string(buf, p);
}

inline void write_graph(const BipartiteGraph& g, std::ostream& out) {
  out << "p bip " << g.n_u() << ' ' << g.n_v() << ' ' << g.m() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << format_weight(e.w) << '\n';
}

inline std::string write_graph(const BipartiteGraph& g) {
  std::ostringstream os;
  write_graph(g, os);
  return os.str();
}

// Insert weights must arrive non-increasing; unsorted lists are rejected here
// so the caller learns to pre-sort (the matcher itself offers an opt-in
// sorting path). Liveness of `del` targets is a replay-time property.
inline OpsScript parse_ops_script(std::istream& in) {
  using namespace iodetail;
  OpsScript script;
  int lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks[0] == "del") {
      if (toks.size() != 2) throw parse_error(lineno, "expected 'del <u-index>'");
      const long u = parse_int(toks[1], lineno, "u-index");
      if (u < 0) throw parse_error(lineno, "u-index must be non-negative");
      script.ops.push_back(DeleteU{static_cast<int>(u), lineno});
    } else if (toks[0] == "add") {
      if (toks.size() < 2 || toks.size() % 2 != 0)
        throw parse_error(lineno, "expected 'add <v-label> [<u> <w>]...'");
      InsertV op;
      op.label = toks[1];
      op.line = lineno;
      for (std::size_t i = 2; i + 1 < toks.size(); i += 2) {
        const long u = parse_int(toks[i], lineno, "u-index");
        const double w = parse_weight(toks[i + 1], lineno);
        if (u < 0) throw parse_error(lineno, "u-index must be non-negative");
        if (!(w > 0.0)) throw parse_error(lineno, "insert weights must be positive");
        if (!op.edges.empty() && w > op.edges.back().second)
          throw parse_error(lineno, "insert weights must be non-increasing (sort edges by weight first)");
        op.edges.push_back({static_cast<int>(u), w});
      }
      script.ops.push_back(std::move(op));
    } else {
      throw parse_error(lineno, "unknown op code '" + toks[0] + "'");
    }
  }
  return script;
}

inline OpsScript parse_ops_script(const std::string& text) {
  std::istringstream is(text);
  return parse_ops_script(is);
}

}  // namespace mwm
