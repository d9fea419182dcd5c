// mwm/auction.hpp -- multiplicative auction solver.
//
// Buyers (V) consume per-buyer queues of (level, edge) pairs in non-increasing
// level order; a successful bid raises the good's price by eps * util, i.e.
// shrinks the edge's utility by a factor of (1-eps). Queues are built with one
// global bucket sort over levels, and each edge contributes pairs only for the
// k_min+1 levels below its own; extending every range down to the global
// minimum level would also be correct but inflates the queues by a factor of
// k_max/k_min without improving the guarantee.
#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "mwm/graph.hpp"
#include "mwm/scaling.hpp"

namespace mwm {

struct QueuePair {
  int level = 0;
  int edge = -1;  // index into AuctionState::edges
};

// Transient bucket-sort structure: L_i holds every edge whose pair range
// [level - k_min, level] covers i.
struct LevelBuckets {
  int min_level = 0;
  std::vector<std::vector<int>> buckets;  // buckets[i - min_level]

  static LevelBuckets build(const std::vector<ScaledEdge>& edges, const EpsilonConfig& cfg) {
    LevelBuckets lb;
    lb.min_level = cfg.min_level();
    lb.buckets.assign(static_cast<std::size_t>(cfg.k_max() - cfg.min_level()) + 1, {});
    for (std::size_t e = 0; e < edges.size(); ++e)
      for (int i = edges[e].level; i >= edges[e].level - cfg.k_min(); --i)
        lb.bucket(i).push_back(static_cast<int>(e));
    return lb;
  }

  std::vector<int>& bucket(int i) { return buckets[static_cast<std::size_t>(i - min_level)]; }
};

struct StateEdge {
  int u = -1;
  int v = -1;
  double w_tilde = 0.0;  // rounded rescaled weight, exactly cfg.power(level)
  int level = 0;
  double w_orig = 0.0;
  int orig_index = -1;  // -1 for dynamically inserted edges
};

// (v, old_edge, new_edge) with -1 for "unmatched"; emitted on every matching
// change when an event sink is installed (used by the dynamic layer).
struct MatchEvent {
  int v = -1;
  int old_edge = -1;
  int new_edge = -1;
};

// Live algorithm state. Fields are deliberately open: the verifier reads them
// and the test suite corrupts them to exercise its negative controls. Mutate
// through the member operations otherwise. Single-threaded while solving; a
// quiescent state may be read concurrently.
class AuctionState {
 public:
  EpsilonConfig cfg;
  int n_u = 0;
  int n_v = 0;
  std::vector<StateEdge> edges;
  std::vector<double> y;                // per-u price, non-decreasing over the run
  std::vector<int> match_u;             // u -> edge index or -1
  std::vector<int> match_v;             // v -> edge index or -1
  std::vector<QueuePair> all_pairs;     // per-v contiguous segments
  std::vector<std::size_t> q_begin, q_end, q_cur;
  std::vector<int> j_v;                 // level of the last pair popped by v (k_max if none)
  std::vector<char> touched;            // match_r(v) called at least once
  std::vector<char> tombstone_u;
  std::vector<std::vector<int>> adj_v;  // kept-edge indices per v (verifier's N(v))
  std::uint64_t pop_count = 0;
  std::vector<MatchEvent>* event_sink = nullptr;

  AuctionState(const ScaledGraph& sg, const EpsilonConfig& config)
      : cfg(config), n_u(sg.base().n_u()), n_v(sg.base().n_v()) {
    edges.reserve(sg.kept().size());
    for (const ScaledEdge& se : sg.kept())
      edges.push_back(StateEdge{se.u, se.v, se.w_rounded, se.level, se.w_orig, se.orig_index});
    y.assign(static_cast<std::size_t>(n_u), 0.0);
    match_u.assign(static_cast<std::size_t>(n_u), -1);
    match_v.assign(static_cast<std::size_t>(n_v), -1);
    j_v.assign(static_cast<std::size_t>(n_v), cfg.k_max());
    touched.assign(static_cast<std::size_t>(n_v), 0);
    tombstone_u.assign(static_cast<std::size_t>(n_u), 0);
    adj_v.assign(static_cast<std::size_t>(n_v), {});
    for (std::size_t e = 0; e < edges.size(); ++e) adj_v[edges[e].v].push_back(static_cast<int>(e));

    // One pass over the global buckets from k_max down to -k_min leaves every
    // Q_v sorted by non-increasing level.
    LevelBuckets lb = LevelBuckets::build(sg.kept(), cfg);
    q_begin.assign(static_cast<std::size_t>(n_v) + 1, 0);
    for (const StateEdge& e : edges) q_begin[static_cast<std::size_t>(e.v) + 1] += static_cast<std::size_t>(cfg.k_min()) + 1;
    for (int v = 0; v < n_v; ++v) q_begin[v + 1] += q_begin[v];
    all_pairs.resize(q_begin[static_cast<std::size_t>(n_v)]);
    std::vector<std::size_t> fill(q_begin.begin(), q_begin.end() - 1);
    for (int i = cfg.k_max(); i >= cfg.min_level(); --i)
      for (int e : lb.bucket(i)) all_pairs[fill[edges[e].v]++] = QueuePair{i, e};
    q_end.assign(q_begin.begin() + 1, q_begin.end());
    q_cur.assign(q_begin.begin(), q_begin.end() - 1);
    q_begin.pop_back();
  }

  std::uint64_t pair_count() const { return all_pairs.size(); }

  std::span<const QueuePair> queue(int v) const {
    return {all_pairs.data() + q_begin[v], all_pairs.data() + q_end[v]};
  }
  bool queue_consumed(int v) const { return q_cur[v] >= q_end[v]; }

  double util(int e) const { return edges[e].w_tilde - y[edges[e].u]; }

  // Match or re-match a buyer. Pops pairs until one passes the threshold test
  // util(uv) >= (1+eps)^level; a displaced buyer is processed immediately
  // after, via an explicit work stack rather than recursion so adversarial
  // displacement chains cannot overflow the call stack.
  void match_r(int v0) {
    int v = v0;
    for (;;) {
      touched[v] = 1;
      assert(match_v[v] < 0);
      int displaced = -1;
      bool matched = false;
      while (q_cur[v] < q_end[v]) {
        const QueuePair p = all_pairs[q_cur[v]++];
        ++pop_count;
        assert(p.level <= j_v[v]);
        j_v[v] = p.level;
        const StateEdge& e = edges[p.edge];
        if (tombstone_u[e.u]) continue;  // lazy deletion
        // Recompute utility at every pop: y may have moved since enqueue.
        const double u_val = e.w_tilde - y[e.u];
        if (u_val >= cfg.power(p.level)) {
          bump_price(e.u, cfg.eps() * u_val);
          const int old_edge = match_u[e.u];
          if (old_edge >= 0) {
            displaced = edges[old_edge].v;
            match_v[displaced] = -1;
            emit(displaced, old_edge, -1);
          }
          match_u[e.u] = p.edge;
          match_v[v] = p.edge;
          emit(v, -1, p.edge);
          matched = true;
          break;
        }
      }
      (void)matched;
      if (displaced < 0) return;
      v = displaced;
    }
  }

  Matching extract_matching() const {
    std::vector<MatchedPair> pairs;
    for (int v = 0; v < n_v; ++v) {
      if (match_v[v] < 0) continue;
      const StateEdge& e = edges[match_v[v]];
      pairs.push_back(MatchedPair{e.u, v, e.w_orig, e.orig_index});
    }
    return Matching(std::move(pairs));
  }

  // --- mutation hooks for the dynamic layer ---

  int add_vertex_v() {
    match_v.push_back(-1);
    j_v.push_back(cfg.k_max());
    touched.push_back(0);
    adj_v.emplace_back();
    q_begin.push_back(all_pairs.size());
    q_end.push_back(all_pairs.size());
    q_cur.push_back(all_pairs.size());
    return n_v++;
  }

  int add_edge(const StateEdge& e) {
    const int id = static_cast<int>(edges.size());
    edges.push_back(e);
    adj_v[e.v].push_back(id);
    return id;
  }

  // Append an already non-increasing pair run as buyer v's queue segment.
  // Only valid for the most recently added vertex (segments are contiguous).
  void set_queue(int v, const std::vector<QueuePair>& pairs) {
    if (q_begin[v] != all_pairs.size() || q_cur[v] != q_end[v])
      throw std::logic_error("set_queue: segment would not be contiguous");
    all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
    q_end[v] = all_pairs.size();
  }

  void set_tombstone(int u) { tombstone_u[u] = 1; }

  void unmatch(int edge_id) {
    const StateEdge& e = edges[edge_id];
    match_u[e.u] = -1;
    match_v[e.v] = -1;
    emit(e.v, edge_id, -1);
  }

 private:
  void bump_price(int u, double inc) {
    assert(inc >= 0.0);  // monotone: prices never decrease
    y[u] += inc;
  }

  void emit(int v, int old_e, int new_e) {
    if (event_sink) event_sink->push_back(MatchEvent{v, old_e, new_e});
  }
};

inline AuctionState build_queues(const ScaledGraph& sg, const EpsilonConfig& cfg) {
  return AuctionState(sg, cfg);
}

struct SolveResult {
  Matching matching;  // original weight units
  AuctionState state;
};

inline SolveResult solve(const BipartiteGraph& g, const EpsilonConfig& cfg) {
  ScaledGraph sg = preprocess(g, cfg);
  AuctionState st = build_queues(sg, cfg);
  for (int v = 0; v < st.n_v; ++v)
    if (st.match_v[v] < 0) st.match_r(v);
  Matching m = st.extract_matching();
  return SolveResult{std::move(m), std::move(st)};
}

inline SolveResult solve(const BipartiteGraph& g, double eps_prime) {
  return solve(g, EpsilonConfig(eps_prime, std::max(g.n_total(), 1)));
}

// Buyer-order override. The guarantee is order-independent; tests re-run with
// shuffled orders to confirm.
inline SolveResult solve_ordered(const BipartiteGraph& g, const EpsilonConfig& cfg, std::span<const int> v_order) {
  ScaledGraph sg = preprocess(g, cfg);
  AuctionState st = build_queues(sg, cfg);
  for (int v : v_order)
    if (st.match_v[v] < 0) st.match_r(v);
  Matching m = st.extract_matching();
  return SolveResult{std::move(m), std::move(st)};
}

}  // namespace mwm
