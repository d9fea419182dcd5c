// mwm/oracle.hpp -- ground-truth maximum weight matchings for testing:
// a dense O(n^3) Hungarian solver for mid-size instances and a bitmask DP
// for tiny ones. The two take unrelated algorithmic routes on purpose so
// they can cross-validate each other.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mwm/graph.hpp"

namespace mwm {

enum class OracleMethod { hungarian, brute_force };

struct OracleResult {
  Matching matching;
  double optimal_weight = 0.0;
  OracleMethod method = OracleMethod::hungarian;
  // Dual potentials in max-weight form: y_u + y_v >= w(uv) on every edge,
  // with equality on matched edges. Filled by the Hungarian solver only.
  std::vector<double> y_u, y_v;
};

namespace detail {

inline std::unordered_map<std::uint64_t, int> edge_index_map(const BipartiteGraph& g) {
  std::unordered_map<std::uint64_t, int> map;
  map.reserve(static_cast<std::size_t>(g.m()) * 2);
  for (int e = 0; e < g.m(); ++e)
    map.emplace((static_cast<std::uint64_t>(g.edge(e).u) << 32) | static_cast<std::uint32_t>(g.edge(e).v), e);
  return map;
}

}  // namespace detail

// Exact maximum weight matching (not necessarily perfect: the square cost
// matrix is padded with zero-weight slack, which is where unmatched vertices
// end up). Shortest-augmenting-path Hungarian with potentials, O(s^3) for
// s = max(n_u, n_v). For integer weights every intermediate value stays
// integral, so results and duals are exact.
inline OracleResult hungarian_exact(const BipartiteGraph& g, int vertex_cap = 2000) {
  if (g.n_total() > vertex_cap)
    throw std::invalid_argument("hungarian_exact: instance exceeds vertex cap of " + std::to_string(vertex_cap));

  OracleResult res;
  res.method = OracleMethod::hungarian;
  res.y_u.assign(static_cast<std::size_t>(g.n_u()), 0.0);
  res.y_v.assign(static_cast<std::size_t>(g.n_v()), 0.0);
  if (g.n_u() == 0 || g.n_v() == 0) return res;

  const int s = std::max(g.n_u(), g.n_v());
  const double w_top = g.max_weight();

  // Minimization form: cost = w_top - w; absent and padded cells cost w_top.
  std::vector<double> cost(static_cast<std::size_t>(s) * s, w_top);
  std::vector<char> present(static_cast<std::size_t>(s) * s, 0);
  for (const Edge& e : g.edges()) {
    cost[static_cast<std::size_t>(e.u) * s + e.v] = w_top - e.w;
    present[static_cast<std::size_t>(e.u) * s + e.v] = 1;
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot_u(static_cast<std::size_t>(s) + 1, 0.0), pot_v(static_cast<std::size_t>(s) + 1, 0.0);
  std::vector<int> assigned(static_cast<std::size_t>(s) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(s) + 1, 0);

  for (int i = 1; i <= s; ++i) {
    assigned[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(s) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(s) + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = assigned[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= s; ++j) {
        if (used[j]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1) * s + (j - 1)] - pot_u[i0] - pot_v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= s; ++j) {
        if (used[j]) {
          pot_u[assigned[j]] += delta;
          pot_v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (assigned[j0] != 0);
    do {
      const int j1 = way[j0];
      assigned[j0] = assigned[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  // Back to max-weight duals: y_u = w_top - pot_u, y_v = -pot_v, so that
  // y_u + y_v >= w on every cell with equality on assigned cells.
  for (int u = 0; u < g.n_u(); ++u) res.y_u[u] = w_top - pot_u[u + 1];
  for (int v = 0; v < g.n_v(); ++v) res.y_v[v] = -pot_v[v + 1];

  auto emap = detail::edge_index_map(g);
  std::vector<MatchedPair> pairs;
  for (int j = 1; j <= s; ++j) {
    const int i = assigned[j];
    const int u = i - 1, v = j - 1;
    if (u >= g.n_u() || v >= g.n_v()) continue;
    if (!present[static_cast<std::size_t>(u) * s + v]) continue;
    auto it = emap.find((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
    pairs.push_back(MatchedPair{u, v, g.edge(it->second).w, it->second});
  }
  res.matching = Matching(std::move(pairs));
  res.optimal_weight = res.matching.total_weight();
  return res;
}

// Exact optimum by dynamic programming over subsets of the smaller side.
// Independent of the Hungarian path end to end.
inline OracleResult brute_force_exact(const BipartiteGraph& g) {
  const int k = std::min(g.n_u(), g.n_v());
  if (k > 12) throw std::invalid_argument("brute_force_exact: smaller side must have at most 12 vertices");
  const bool u_small = g.n_u() <= g.n_v();
  const int n_small = k;
  const int n_large = u_small ? g.n_v() : g.n_u();

  OracleResult res;
  res.method = OracleMethod::brute_force;
  if (g.m() == 0) return res;

  // w_small_large[i][j] with i over the small side.
  std::vector<std::vector<std::pair<int, double>>> inc(static_cast<std::size_t>(n_large));
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    const int i = u_small ? ed.u : ed.v;
    const int j = u_small ? ed.v : ed.u;
    inc[j].push_back({i, ed.w});
  }

  const std::size_t full = std::size_t{1} << n_small;
  std::vector<double> dp(full, 0.0);
  std::vector<std::vector<std::int16_t>> choice(static_cast<std::size_t>(n_large));
  for (int j = 0; j < n_large; ++j) {
    choice[j].assign(full, 0);
    if (inc[j].empty()) continue;
    for (std::size_t mask = full; mask-- > 0;) {
      double best = dp[mask];
      std::int16_t pick = 0;
      for (const auto& [i, w] : inc[j]) {
        if (!(mask & (std::size_t{1} << i))) continue;
        const double cand = dp[mask ^ (std::size_t{1} << i)] + w;
        if (cand > best) {
          best = cand;
          pick = static_cast<std::int16_t>(i + 1);
        }
      }
      dp[mask] = best;
      choice[j][mask] = pick;
    }
  }

  auto emap = detail::edge_index_map(g);
  std::vector<MatchedPair> pairs;
  std::size_t mask = full - 1;
  for (int j = n_large - 1; j >= 0; --j) {
    const std::int16_t c = choice[j][mask];
    if (c == 0) continue;
    const int i = c - 1;
    const int u = u_small ? i : j;
    const int v = u_small ? j : i;
    auto it = emap.find((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
    pairs.push_back(MatchedPair{u, v, g.edge(it->second).w, it->second});
    mask ^= std::size_t{1} << i;
  }
  res.matching = Matching(std::move(pairs));
  res.optimal_weight = res.matching.total_weight();
  return res;
}

}  // namespace mwm
