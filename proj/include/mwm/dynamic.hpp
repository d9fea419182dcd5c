// mwm/dynamic.hpp -- maintains a (1-eps')-approximate maximum weight matching
// under one-sided updates: deletions of U-vertices (goods) and insertions of
// V-vertices (buyers) with weight-sorted edge lists.
//
// Prices only rise and queue cursors only advance, so both operations reuse
// the static machinery: a deletion tombstones the good and re-matches the
// widowed buyer; an insertion builds the new buyer's queue and matches it.
//
// Static preprocessing fixes the rescale divisor from w_max and n, both of
// which move under updates. This structure instead commits at construction to
// a weight ceiling w_cap and a vertex budget n_cap and scales once by
// eps' * w_cap / n_cap. The power table and k_max then stay fixed for the
// whole run. Edges below that fixed threshold are dropped on sight; the
// approximation bound is kept as long as inserted weights stay in
// (threshold, w_cap] and the vertex count stays within n_cap.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mwm/auction.hpp"
#include "mwm/graph.hpp"
#include "mwm/scaling.hpp"

namespace mwm {

struct MatchingDelta {
  std::vector<MatchedPair> removed;
  std::vector<MatchedPair> added;
  double new_total_weight = 0.0;

  bool empty() const { return removed.empty() && added.empty(); }
};

class DynamicMatcher {
 public:
  struct Options {
    double eps_prime = 0.1;
    double w_cap = 0.0;  // required: ceiling for all initial and future weights
    double eps = 0.0;    // 0 -> eps_prime / 4
    int n_cap = 0;       // 0 -> 4 * initial vertex count (headroom for insertions)
  };

  DynamicMatcher(const BipartiteGraph& initial, const Options& opt)
      : cfg_(make_config(initial, opt)),
        w_cap_(opt.w_cap),
        n_cap_(opt.n_cap > 0 ? opt.n_cap : std::max(4 * initial.n_total(), 2)),
        scale_(cfg_.eps_prime() * w_cap_ / n_cap_),
        state_(preprocess_with_scale(validate_initial(initial, opt.w_cap), cfg_, scale_), cfg_) {
    for (const Edge& e : initial.edges())
      if (e.w / scale_ < 1.0) dropped_alive_.push_back(e);
    m_initial_ = initial.m();
    for (int v = 0; v < state_.n_v; ++v)
      if (state_.match_v[v] < 0) state_.match_r(v);
    current_total_ = state_.extract_matching().total_weight();
  }

  // Type (1): delete a good with its incident edges. If it was matched, its
  // buyer is re-matched right away, restoring Invariant 4.
  MatchingDelta delete_u(int u) {
    if (u < 0 || u >= state_.n_u) throw std::invalid_argument("delete_u: index out of range");
    if (state_.tombstone_u[u]) throw std::invalid_argument("delete_u: vertex already deleted");
    std::vector<MatchEvent> events;
    state_.event_sink = &events;
    state_.set_tombstone(u);
    const int me = state_.match_u[u];
    if (me >= 0) {
      const int v = state_.edges[me].v;
      state_.unmatch(me);
      state_.match_r(v);
    }
    state_.event_sink = nullptr;
    ++op_count_;
    return compress(events);
  }

  // Type (2): insert a buyer with edges sorted by non-increasing weight.
  // With presorted=false the list is sorted here first (costs an extra
  // O(l log l)); in strict mode unsorted input is an error so callers learn
  // to supply sorted lists.
  std::pair<int, MatchingDelta> insert_v(std::span<const std::pair<int, double>> edges, bool presorted = true) {
    std::vector<std::pair<int, double>> sorted;
    if (!presorted) {
      sorted.assign(edges.begin(), edges.end());
      std::stable_sort(sorted.begin(), sorted.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      edges = sorted;
    }
    std::vector<char> seen(static_cast<std::size_t>(state_.n_u), 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& [u, w] = edges[i];
      if (u < 0 || u >= state_.n_u) throw std::invalid_argument("insert_v: unknown u-index " + std::to_string(u));
      if (state_.tombstone_u[u]) throw std::invalid_argument("insert_v: u-index " + std::to_string(u) + " was deleted");
      if (seen[u]++) throw std::invalid_argument("insert_v: duplicate u-index " + std::to_string(u));
      if (!std::isfinite(w) || !(w > 0.0)) throw std::invalid_argument("insert_v: weights must be positive and finite");
      if (w > w_cap_) throw std::invalid_argument("insert_v: weight exceeds declared w_cap");
      if (i > 0 && w > edges[i - 1].second)
        throw std::invalid_argument("insert_v: edges must be sorted by non-increasing weight");
    }

    std::vector<MatchEvent> events;
    state_.event_sink = &events;
    const int v = state_.add_vertex_v();

    // Bucket the l edges' level runs into level bins and concatenate from the
    // top: O(l * k_min + level range), no comparison sort.
    std::vector<int> kept_ids;
    int l_max = cfg_.min_level(), l_min = cfg_.k_max();
    for (const auto& [u, w] : edges) {
      ++inserted_edges_;
      const double x = w / scale_;
      if (x < 1.0) {
        dropped_alive_.push_back(Edge{u, v, w});
        continue;
      }
      const int level = cfg_.level_of(x);
      kept_ids.push_back(state_.add_edge(StateEdge{u, v, cfg_.power(level), level, w, -1}));
      l_max = std::max(l_max, level);
      l_min = std::min(l_min, level);
    }
    if (!kept_ids.empty()) {
      const int lo = l_min - cfg_.k_min();
      std::vector<std::vector<QueuePair>> bins(static_cast<std::size_t>(l_max - lo) + 1);
      for (int id : kept_ids) {
        const int lvl = state_.edges[id].level;
        for (int i = lvl; i >= lvl - cfg_.k_min(); --i) bins[static_cast<std::size_t>(l_max - i)].push_back(QueuePair{i, id});
      }
      std::vector<QueuePair> run;
      run.reserve(kept_ids.size() * (static_cast<std::size_t>(cfg_.k_min()) + 1));
      for (auto& bin : bins) run.insert(run.end(), bin.begin(), bin.end());
      state_.set_queue(v, run);
    }
    state_.match_r(v);
    state_.event_sink = nullptr;
    ++op_count_;
    return {v, compress(events)};
  }

  Matching current_matching() const { return state_.extract_matching(); }

  const AuctionState& state() const { return state_; }
  AuctionState& state() { return state_; }

  double w_cap() const { return w_cap_; }
  int n_cap() const { return n_cap_; }
  double scale() const { return scale_; }
  // Weights strictly below this are dropped on arrival.
  double drop_threshold() const { return scale_; }

  std::uint64_t op_count() const { return op_count_; }
  std::uint64_t inserted_edge_count() const { return inserted_edges_; }
  std::uint64_t initial_edge_count() const { return m_initial_; }
  // (m_init + m_inserted) * (k_min + 1); cumulative pops never exceed it.
  std::uint64_t theoretical_pop_budget() const {
    return (m_initial_ + inserted_edges_) * (static_cast<std::uint64_t>(cfg_.k_min()) + 1);
  }

  // Snapshot of the surviving graph in original units, including edges that
  // fell below the drop threshold (they exist, this structure just never
  // matches them). Deleted goods become isolated vertices.
  BipartiteGraph alive_graph() const {
    std::vector<Edge> edges;
    for (const StateEdge& se : state_.edges)
      if (!state_.tombstone_u[se.u]) edges.push_back(Edge{se.u, se.v, se.w_orig});
    for (const Edge& e : dropped_alive_)
      if (!state_.tombstone_u[e.u]) edges.push_back(e);
    return BipartiteGraph(state_.n_u, state_.n_v, std::move(edges));
  }

 private:
  static EpsilonConfig make_config(const BipartiteGraph& g, const Options& opt) {
    if (!(opt.w_cap > 0.0) || !std::isfinite(opt.w_cap)) throw std::invalid_argument("w_cap must be positive and finite");
    const int n_cap = opt.n_cap > 0 ? opt.n_cap : std::max(4 * g.n_total(), 2);
    const double eps = opt.eps > 0.0 ? opt.eps : opt.eps_prime / 4.0;
    return EpsilonConfig(opt.eps_prime, eps, n_cap);
  }

  static const BipartiteGraph& validate_initial(const BipartiteGraph& g, double w_cap) {
    for (const Edge& e : g.edges())
      if (e.w > w_cap) throw std::invalid_argument("initial edge weight exceeds w_cap");
    return g;
  }

  MatchingDelta compress(const std::vector<MatchEvent>& events) {
    // Net effect per buyer: first old edge vs last new edge.
    std::vector<int> order;
    std::unordered_map<int, std::pair<int, int>> net;  // v -> (first_old, last_new)
    for (const MatchEvent& ev : events) {
      auto [it, fresh] = net.try_emplace(ev.v, std::pair<int, int>{ev.old_edge, ev.new_edge});
      if (fresh)
        order.push_back(ev.v);
      else
        it->second.second = ev.new_edge;
    }
    MatchingDelta d;
    for (int v : order) {
      const auto [before, after] = net[v];
      if (before == after) continue;
      if (before >= 0) {
        const StateEdge& e = state_.edges[before];
        d.removed.push_back(MatchedPair{e.u, v, e.w_orig, e.orig_index});
        current_total_ -= e.w_orig;
      }
      if (after >= 0) {
        const StateEdge& e = state_.edges[after];
        d.added.push_back(MatchedPair{e.u, v, e.w_orig, e.orig_index});
        current_total_ += e.w_orig;
      }
    }
    d.new_total_weight = current_total_;
    return d;
  }

  EpsilonConfig cfg_;
  double w_cap_;
  int n_cap_;
  double scale_;
  AuctionState state_;
  std::vector<Edge> dropped_alive_;
  double current_total_ = 0.0;
  std::uint64_t op_count_ = 0;
  std::uint64_t inserted_edges_ = 0;
  std::uint64_t m_initial_ = 0;
};

}  // namespace mwm
