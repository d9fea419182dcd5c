// mwm/graph.hpp -- weighted bipartite graph and matching types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace mwm {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Immutable edge-weighted bipartite graph over dense 0-based indices.
// U-vertices are "goods", V-vertices are "buyers" in auction terms.
// Immutable after construction; safe to share read-only across threads.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  BipartiteGraph(int n_u, int n_v, std::vector<Edge> edges)
      : n_u_(n_u), n_v_(n_v), edges_(std::move(edges)) {
    if (n_u_ < 0 || n_v_ < 0) throw std::invalid_argument("vertex counts must be non-negative");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
      if (e.u < 0 || e.u >= n_u_) throw std::invalid_argument("edge u-index " + std::to_string(e.u) + " out of range");
      if (e.v < 0 || e.v >= n_v_) throw std::invalid_argument("edge v-index " + std::to_string(e.v) + " out of range");
      if (!std::isfinite(e.w) || e.w < 0.0) throw std::invalid_argument("edge weights must be finite and non-negative");
      const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint32_t>(e.v);
      if (!seen.insert(key).second)
        throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    build_adjacency();
  }

  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  int n_total() const { return n_u_ + n_v_; }
  int m() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Edge indices incident to a vertex.
  std::span<const int> adj_u(int u) const {
    return {u_adj_.data() + u_off_[u], u_adj_.data() + u_off_[u + 1]};
  }
  std::span<const int> adj_v(int v) const {
    return {v_adj_.data() + v_off_[v], v_adj_.data() + v_off_[v + 1]};
  }

  double max_weight() const {
    double w = 0.0;
    for (const Edge& e : edges_) w = std::max(w, e.w);
    return w;
  }

 private:
  void build_adjacency() {
    u_off_.assign(static_cast<std::size_t>(n_u_) + 1, 0);
    v_off_.assign(static_cast<std::size_t>(n_v_) + 1, 0);
    for (const Edge& e : edges_) {
      ++u_off_[static_cast<std::size_t>(e.u) + 1];
      ++v_off_[static_cast<std::size_t>(e.v) + 1];
    }
    for (int u = 0; u < n_u_; ++u) u_off_[u + 1] += u_off_[u];
    for (int v = 0; v < n_v_; ++v) v_off_[v + 1] += v_off_[v];
    u_adj_.resize(edges_.size());
    v_adj_.resize(edges_.size());
    std::vector<int> fu(u_off_.begin(), u_off_.end() - 1);
    std::vector<int> fv(v_off_.begin(), v_off_.end() - 1);
    for (int e = 0; e < m(); ++e) {
      u_adj_[static_cast<std::size_t>(fu[edges_[e].u]++)] = e;
      v_adj_[static_cast<std::size_t>(fv[edges_[e].v]++)] = e;
    }
  }

  int n_u_ = 0;
  int n_v_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> u_off_, u_adj_, v_off_, v_adj_;
};

struct MatchedPair {
  int u = -1;
  int v = -1;
  double w = 0.0;
  int edge = -1;  // original edge index when known, -1 otherwise
};

// A matching: vertex-disjoint edge set with its total weight in original
// (pre-scaling) units.
class Matching {
 public:
  Matching() = default;

  explicit Matching(std::vector<MatchedPair> pairs) : pairs_(std::move(pairs)) {
    std::unordered_set<int> us, vs;
    for (const MatchedPair& p : pairs_) {
      if (!us.insert(p.u).second || !vs.insert(p.v).second)
        throw std::invalid_argument("not a matching: vertex appears twice");
      total_ += p.w;
    }
  }

  const std::vector<MatchedPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  double total_weight() const { return total_; }

  // Validity against a graph: every pair is a graph edge with the recorded
  // weight, and no vertex repeats. Runs in O(n + pairs) given edge indices.
  bool is_valid_for(const BipartiteGraph& g, std::string* why = nullptr) const {
    std::vector<char> used_u(static_cast<std::size_t>(g.n_u()), 0);
    std::vector<char> used_v(static_cast<std::size_t>(g.n_v()), 0);
    for (const MatchedPair& p : pairs_) {
      if (p.u < 0 || p.u >= g.n_u() || p.v < 0 || p.v >= g.n_v()) {
        if (why) *why = "pair references vertex out of range";
        return false;
      }
      if (used_u[p.u]++ || used_v[p.v]++) {
        if (why) *why = "vertex matched twice";
        return false;
      }
      int e = p.edge < g.m() ? p.edge : -1;
      if (e < 0) {
        for (int cand : g.adj_u(p.u))
          if (g.edge(cand).v == p.v) { e = cand; break; }
      }
      if (e < 0 || g.edge(e).u != p.u || g.edge(e).v != p.v) {
        if (why) *why = "pair (" + std::to_string(p.u) + "," + std::to_string(p.v) + ") is not a graph edge";
        return false;
      }
      if (g.edge(e).w != p.w) {
        if (why) *why = "pair weight disagrees with graph";
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<MatchedPair> pairs_;
  double total_ = 0.0;
};

}  // namespace mwm
