// mwm/verify.hpp -- runtime checks for the solver's correctness argument:
// the four state invariants, approximate dual feasibility, and the
// alternating-path inequalities over M (symmetric difference) M*.
//
// All checks read rounded/rescaled weights, where the inequalities are exact;
// approx_ratio alone works in original units. Checkers never mutate state
// (tests pin this down by fingerprinting the state before and after).
#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mwm/auction.hpp"
#include "mwm/graph.hpp"

namespace mwm {

// Relative tolerance, applied on the slack side of every inequality.
inline constexpr double kVerifyRelTol = 1e-9;

struct CheckResult {
  std::string name;
  bool pass = true;
  // Smallest observed slack across all tested inequalities (negative means a
  // violation of that magnitude). 0 when nothing was tested.
  double worst_margin = 0.0;
  bool recorded = false;
  std::string witness;  // offending vertex/edge/path; empty when passing

  CheckResult() = default;
  explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

  void record(double margin, const std::string& where, double tol_scale) {
    const bool tightest = !recorded || margin < worst_margin;
    if (tightest) worst_margin = margin;
    recorded = true;
    if (margin < -kVerifyRelTol * tol_scale) {
      pass = false;
      if (tightest || witness.empty()) witness = where;
    }
  }
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const CheckResult& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::string to_text() const {
    std::ostringstream os;
    for (const CheckResult& c : checks) {
      os << (c.pass ? "PASS " : "FAIL ") << c.name << "  margin=" << c.worst_margin;
      if (!c.pass) os << "  witness: " << c.witness;
      os << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline std::string edge_str(const AuctionState& st, int e) {
  return "edge(u=" + std::to_string(st.edges[e].u) + ",v=" + std::to_string(st.edges[e].v) + ")";
}

}  // namespace detail

// Invariant 1: a buyer that has popped down to level j_v has no live neighbor
// of utility above (1+eps)^{j_v+1}. Edges whose entire pair range
// [level-k_min, level] was consumed are only bounded by (1+eps)^{level-k_min}
// (<= eps * w~), so the admissible bound is the max of the two; the second
// term is exactly what the dual-feasibility argument consumes for them.
inline CheckResult check_invariant_1(const AuctionState& st) {
  CheckResult r("invariant-1");
  for (int v = 0; v < st.n_v; ++v) {
    const double cap_v = st.cfg.power(st.j_v[v] + 1);
    for (int e : st.adj_v[v]) {
      const StateEdge& se = st.edges[e];
      if (st.tombstone_u[se.u]) continue;
      const double u_val = se.w_tilde - st.y[se.u];
      const double allowed = std::max(cap_v, st.cfg.power(se.level - st.cfg.k_min()));
      r.record(allowed - u_val, detail::edge_str(st, e), std::max({1.0, allowed, std::abs(u_val)}));
    }
  }
  return r;
}

// Invariant 2: a matched buyer prefers its good up to a (1-2eps) factor
// against every live competitor whose pairs it could still see; competitors
// with a consumed pair range are excused by their exhaustion bound
// util <= (1+eps)^{level-k_min}.
inline CheckResult check_invariant_2(const AuctionState& st) {
  CheckResult r("invariant-2");
  const double factor = 1.0 - 2.0 * st.cfg.eps();
  for (int v = 0; v < st.n_v; ++v) {
    const int me = st.match_v[v];
    if (me < 0) continue;
    const double util_m = st.util(me);
    for (int e : st.adj_v[v]) {
      if (e == me) continue;
      const StateEdge& se = st.edges[e];
      if (st.tombstone_u[se.u]) continue;
      const double util_o = se.w_tilde - st.y[se.u];
      const double m1 = util_m - factor * util_o;
      const double m2 = st.cfg.power(se.level - st.cfg.k_min()) - util_o;
      r.record(std::max(m1, m2), detail::edge_str(st, e) + " vs matched " + detail::edge_str(st, me),
               std::max({1.0, std::abs(util_m), std::abs(util_o)}));
    }
  }
  return r;
}

// Invariant 3: unmatched live goods are free (y=0); matched goods carry a
// strictly positive price. Both clauses are exact, no tolerance.
inline CheckResult check_invariant_3(const AuctionState& st) {
  CheckResult r("invariant-3");
  for (int u = 0; u < st.n_u; ++u) {
    if (st.tombstone_u[u]) continue;  // deleted goods keep their frozen price
    if (st.match_u[u] < 0) {
      if (st.y[u] != 0.0) {
        r.pass = false;
        r.worst_margin = std::min(r.worst_margin, -std::abs(st.y[u]));
        r.witness = "unmatched u=" + std::to_string(u) + " has y=" + std::to_string(st.y[u]);
      }
    } else if (!(st.y[u] > 0.0)) {
      r.pass = false;
      r.worst_margin = std::min(r.worst_margin, st.y[u] == 0.0 ? -1.0 : st.y[u]);
      r.witness = "matched u=" + std::to_string(u) + " has y=" + std::to_string(st.y[u]);
    }
  }
  return r;
}

// Invariant 4: every buyer that was ever processed is matched or has fully
// consumed its queue.
inline CheckResult check_invariant_4(const AuctionState& st) {
  CheckResult r("invariant-4");
  for (int v = 0; v < st.n_v; ++v) {
    if (!st.touched[v] || st.match_v[v] >= 0) continue;
    if (!st.queue_consumed(v)) {
      r.pass = false;
      const double remaining = static_cast<double>(st.q_end[v] - st.q_cur[v]);
      r.worst_margin = std::min(r.worst_margin, -remaining);
      r.witness = "unmatched v=" + std::to_string(v) + " with " + std::to_string(static_cast<long long>(remaining)) +
                  " unconsumed pairs";
    }
  }
  return r;
}

// Approximate complementary slackness on the rounded weights. With
// y_v := util of the matched edge (0 if unmatched):
//   - every live edge satisfies y_u + y_v >= (1-2eps) * w~(uv),
//   - matched edges satisfy y_u + y_v = w~(uv) exactly,
//   - unmatched vertices carry zero duals.
inline CheckResult check_dual_feasibility(const AuctionState& st) {
  CheckResult r("dual-feasibility");
  const double factor = 1.0 - 2.0 * st.cfg.eps();
  std::vector<double> y_v(static_cast<std::size_t>(st.n_v), 0.0);
  for (int v = 0; v < st.n_v; ++v)
    if (st.match_v[v] >= 0) y_v[v] = st.util(st.match_v[v]);

  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    const StateEdge& se = st.edges[e];
    if (st.tombstone_u[se.u]) continue;
    const double lhs = st.y[se.u] + y_v[se.v];
    r.record(lhs - factor * se.w_tilde, detail::edge_str(st, static_cast<int>(e)),
             std::max(1.0, se.w_tilde));
    if (st.match_v[se.v] == static_cast<int>(e))
      r.record(-std::abs(lhs - se.w_tilde), "matched " + detail::edge_str(st, static_cast<int>(e)),
               std::max(1.0, se.w_tilde));
  }
  for (int u = 0; u < st.n_u; ++u) {
    if (st.tombstone_u[u] || st.match_u[u] >= 0) continue;
    if (st.y[u] != 0.0) {
      r.pass = false;
      r.worst_margin = std::min(r.worst_margin, -std::abs(st.y[u]));
      r.witness = "unmatched u=" + std::to_string(u) + " has nonzero dual";
    }
  }
  return r;
}

// Internal consistency of the mutual matching maps, plus strictly positive
// utility on matched edges.
inline CheckResult check_match_consistency(const AuctionState& st) {
  CheckResult r("match-consistency");
  auto fail = [&r](const std::string& w) {
    r.pass = false;
    r.worst_margin = std::min(r.worst_margin, -1.0);
    r.witness = w;
  };
  for (int u = 0; u < st.n_u; ++u) {
    const int e = st.match_u[u];
    if (e < 0) continue;
    if (st.edges[e].u != u || st.match_v[st.edges[e].v] != e) fail("match_u/match_v disagree at u=" + std::to_string(u));
    if (st.tombstone_u[u]) fail("matched edge incident to tombstoned u=" + std::to_string(u));
  }
  for (int v = 0; v < st.n_v; ++v) {
    const int e = st.match_v[v];
    if (e < 0) continue;
    if (st.edges[e].v != v || st.match_u[st.edges[e].u] != e) fail("match_v/match_u disagree at v=" + std::to_string(v));
    if (!(st.util(e) > 0.0)) fail("matched " + detail::edge_str(st, e) + " has non-positive utility");
  }
  return r;
}

// Queues must stay sorted by non-increasing level with cursors in range.
inline CheckResult check_queue_order(const AuctionState& st) {
  CheckResult r("queue-order");
  for (int v = 0; v < st.n_v; ++v) {
    if (st.q_begin[v] > st.q_cur[v] || st.q_cur[v] > st.q_end[v]) {
      r.pass = false;
      r.worst_margin = std::min(r.worst_margin, -1.0);
      r.witness = "cursor out of range at v=" + std::to_string(v);
      continue;
    }
    for (std::size_t i = st.q_begin[v] + 1; i < st.q_end[v]; ++i) {
      if (st.all_pairs[i].level > st.all_pairs[i - 1].level) {
        r.pass = false;
        r.worst_margin = std::min(r.worst_margin, -1.0);
        r.witness = "queue of v=" + std::to_string(v) + " not sorted at offset " + std::to_string(i - st.q_begin[v]);
        break;
      }
    }
  }
  return r;
}

// The live rounded-weight graph the solver actually operates on (tombstoned
// goods excluded). This is the graph exact oracles should solve when their
// optimum feeds the alternating-path checker.
inline BipartiteGraph rounded_graph(const AuctionState& st) {
  std::vector<Edge> edges;
  edges.reserve(st.edges.size());
  for (const StateEdge& se : st.edges)
    if (!st.tombstone_u[se.u]) edges.push_back(Edge{se.u, se.v, se.w_tilde});
  return BipartiteGraph(st.n_u, st.n_v, std::move(edges));
}

// Decomposes M (symmetric difference) M* into alternating paths and even
// cycles and verifies on each component that the M side retains at least a
// (1-2eps) fraction of the M* side (rounded weights). Components are
// classified by endpoint matched-status: cycles are case 1, paths with both
// endpoints unmatched are 2b, with one unmatched endpoint 2a (U-side
// endpoints) or 2c (V-side); paths with both endpoints matched can only arise
// from an M-majority component and are folded into 2c.
// m_star must be a matching over the live rounded graph.
inline CheckResult check_alternating_paths(const AuctionState& st, const Matching& m_star) {
  CheckResult r("alternating-paths");
  const double factor = 1.0 - 2.0 * st.cfg.eps();

  std::unordered_map<std::uint64_t, int> live;
  live.reserve(st.edges.size() * 2);
  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    const StateEdge& se = st.edges[e];
    if (!st.tombstone_u[se.u]) live.emplace((static_cast<std::uint64_t>(se.u) << 32) | static_cast<std::uint32_t>(se.v), static_cast<int>(e));
  }

  std::vector<char> in_star(st.edges.size(), 0);
  for (const MatchedPair& p : m_star.pairs()) {
    auto it = live.find((static_cast<std::uint64_t>(p.u) << 32) | static_cast<std::uint32_t>(p.v));
    if (it == live.end())
      throw std::invalid_argument("check_alternating_paths: m_star pair is not a live edge of the state");
    in_star[it->second] = 1;
  }

  // Symmetric difference; every vertex has degree <= 2 (one M edge, one M* edge).
  struct Node {
    int m_edge = -1;
    int star_edge = -1;
  };
  std::vector<Node> nodes(static_cast<std::size_t>(st.n_u) + st.n_v);
  auto uid = [](int u) { return u; };
  auto vid = [&st](int v) { return st.n_u + v; };
  std::vector<int> diff;
  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    const StateEdge& se = st.edges[e];
    if (st.tombstone_u[se.u]) continue;
    const bool in_m = st.match_v[se.v] == static_cast<int>(e);
    if (in_m == static_cast<bool>(in_star[e])) continue;
    diff.push_back(static_cast<int>(e));
    Node& nu = nodes[uid(se.u)];
    Node& nv = nodes[vid(se.v)];
    (in_m ? nu.m_edge : nu.star_edge) = static_cast<int>(e);
    (in_m ? nv.m_edge : nv.star_edge) = static_cast<int>(e);
  }

  std::vector<char> visited(st.edges.size(), 0);
  auto other_endpoint = [&](int e, int node) {
    const StateEdge& se = st.edges[e];
    return node == uid(se.u) ? vid(se.v) : uid(se.u);
  };
  auto walk = [&](int start_node, int start_edge) {
    double w_m = 0.0, w_star = 0.0;
    int node = start_node, e = start_edge;
    int last_node = start_node;
    while (e >= 0 && !visited[e]) {
      visited[e] = 1;
      const bool in_m = st.match_v[st.edges[e].v] == e;
      (in_m ? w_m : w_star) += st.edges[e].w_tilde;
      node = other_endpoint(e, node);
      last_node = node;
      const Node& nd = nodes[node];
      e = in_m ? nd.star_edge : nd.m_edge;  // alternate
    }
    return std::tuple<double, double, int>{w_m, w_star, last_node};
  };
  auto degree = [&nodes](int node) {
    return (nodes[node].m_edge >= 0 ? 1 : 0) + (nodes[node].star_edge >= 0 ? 1 : 0);
  };
  auto node_matched = [&](int node) {
    return node < st.n_u ? st.match_u[node] >= 0 : st.match_v[node - st.n_u] >= 0;
  };

  int components = 0;
  auto check_component = [&](double w_m, double w_star, const std::string& kase, int a, int b) {
    ++components;
    std::string where = "case " + kase + " component";
    if (a >= 0)
      where += " endpoints " + std::string(a < st.n_u ? "u" : "v") + std::to_string(a < st.n_u ? a : a - st.n_u) + "," +
               std::string(b < st.n_u ? "u" : "v") + std::to_string(b < st.n_u ? b : b - st.n_u);
    r.record(w_m - factor * w_star, where, std::max({1.0, w_m, w_star}));
  };

  // Paths first (start at degree-1 vertices), remaining components are cycles.
  for (std::size_t node = 0; node < nodes.size(); ++node) {
    if (degree(static_cast<int>(node)) != 1) continue;
    const int e0 = nodes[node].m_edge >= 0 ? nodes[node].m_edge : nodes[node].star_edge;
    if (visited[e0]) continue;
    auto [w_m, w_star, last] = walk(static_cast<int>(node), e0);
    const bool a_matched = node_matched(static_cast<int>(node));
    const bool b_matched = node_matched(last);
    const int unmatched = (a_matched ? 0 : 1) + (b_matched ? 0 : 1);
    std::string kase;
    if (unmatched == 2) kase = "2b";
    else if (unmatched == 1) kase = (node < static_cast<std::size_t>(st.n_u) && last < st.n_u) ? "2a" : "2c";
    else kase = "2c";
    check_component(w_m, w_star, kase, static_cast<int>(node), last);
  }
  for (int e : diff) {
    if (visited[e]) continue;
    auto [w_m, w_star, last] = walk(uid(st.edges[e].u), e);
    (void)last;
    check_component(w_m, w_star, "1", -1, -1);
  }
  (void)components;
  return r;
}

// w(M) / w(M*) in original units; 1.0 by convention when the optimum is
// weightless (in particular when both matchings are empty).
inline double approx_ratio(const Matching& m, const Matching& m_star) {
  if (!(m_star.total_weight() > 0.0)) return 1.0;
  return m.total_weight() / m_star.total_weight();
}

// Invariants 1-4 plus dual feasibility and the structural sanity checks.
inline VerificationReport run_invariant_suite(const AuctionState& st) {
  VerificationReport rep;
  rep.checks.push_back(check_invariant_1(st));
  rep.checks.push_back(check_invariant_2(st));
  rep.checks.push_back(check_invariant_3(st));
  rep.checks.push_back(check_invariant_4(st));
  rep.checks.push_back(check_dual_feasibility(st));
  rep.checks.push_back(check_match_consistency(st));
  rep.checks.push_back(check_queue_order(st));
  return rep;
}

// FNV-1a over the mutable state; used to demonstrate that checkers are pure.
inline std::uint64_t state_fingerprint(const AuctionState& st) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix_bytes = [&h](const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_u64 = [&](std::uint64_t x) { mix_bytes(&x, sizeof x); };
  for (double d : st.y) mix_bytes(&d, sizeof d);
  for (int x : st.match_u) mix_u64(static_cast<std::uint64_t>(x));
  for (int x : st.match_v) mix_u64(static_cast<std::uint64_t>(x));
  for (std::size_t c : st.q_cur) mix_u64(c);
  for (int x : st.j_v) mix_u64(static_cast<std::uint64_t>(x));
  for (char c : st.touched) mix_u64(static_cast<std::uint64_t>(c));
  for (char c : st.tombstone_u) mix_u64(static_cast<std::uint64_t>(c));
  mix_u64(st.pop_count);
  return h;
}

}  // namespace mwm
