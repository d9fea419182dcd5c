// mwm/generator.hpp -- seeded random instances. Output is a pure function of
// the arguments: sampling uses raw mt19937_64 draws (never the standard
// distributions, whose results vary across library implementations).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "mwm/graph.hpp"

namespace mwm {

namespace gendetail {

// Uniform in (0, 1], from the top 53 bits.
inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1p-53;
}

}  // namespace gendetail

// m distinct uniformly-sampled pairs; weights uniform in (0, w_max], or
// uniform integers in [1, w_max] when integer_weights is set (useful for
// exact-oracle comparisons and the additive-auction baseline).
inline BipartiteGraph gen_random(int n_u, int n_v, long long m, double w_max, std::uint64_t seed,
                                 bool integer_weights = false) {
  if (n_u < 0 || n_v < 0 || m < 0) throw std::invalid_argument("gen_random: counts must be non-negative");
  if (!(w_max > 0.0) || !std::isfinite(w_max)) throw std::invalid_argument("gen_random: w_max must be positive");
  const long long grid = static_cast<long long>(n_u) * n_v;
  if (m > grid)
    throw std::invalid_argument("gen_random: m=" + std::to_string(m) + " exceeds n_u*n_v=" + std::to_string(grid));

  std::mt19937_64 rng(seed);
  std::vector<long long> cells;
  cells.reserve(static_cast<std::size_t>(m));
  if (2 * m > grid) {
    // Dense request: partial Fisher-Yates over the whole grid.
    std::vector<long long> all(static_cast<std::size_t>(grid));
    for (long long i = 0; i < grid; ++i) all[static_cast<std::size_t>(i)] = i;
    for (long long i = 0; i < m; ++i) {
      const long long j = i + static_cast<long long>(rng() % static_cast<std::uint64_t>(grid - i));
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
      cells.push_back(all[static_cast<std::size_t>(i)]);
    }
  } else {
    std::unordered_set<long long> used;
    used.reserve(static_cast<std::size_t>(m) * 2);
    while (static_cast<long long>(cells.size()) < m) {
      const long long c = static_cast<long long>(rng() % static_cast<std::uint64_t>(grid));
      if (used.insert(c).second) cells.push_back(c);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(cells.size());
  const long long w_int_max = std::max(1ll, static_cast<long long>(std::llround(w_max)));
  for (long long c : cells) {
    const int u = static_cast<int>(c / n_v);
    const int v = static_cast<int>(c % n_v);
    double w;
    if (integer_weights)
      w = static_cast<double>(1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(w_int_max)));
    else
      w = gendetail::unit_real(rng) * w_max;
    edges.push_back(Edge{u, v, w});
  }
  return BipartiteGraph(n_u, n_v, std::move(edges));
}

}  // namespace mwm
