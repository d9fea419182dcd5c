// tools/bench_core.hpp -- benchmark grid runner and the classical
// additive-auction baseline it compares against. Not part of the library
// API: the baseline exists to exhibit the contrast between constant price
// steps (round count grows with w_max) and multiplicative ones (pop count
// bounded by m*(k_min+1) regardless of weights).
#pragma once

#include <chrono>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwm/auction.hpp"
#include "mwm/generator.hpp"
#include "mwm/graph.hpp"
#include "mwm/oracle.hpp"

namespace mwmbench {

struct AdditiveResult {
  mwm::Matching matching;
  std::uint64_t rounds = 0;  // bids processed
};

// Classical auction: each successful bid raises the price by a constant
// step, so termination takes O(n * w_max / step) rounds and the matching is
// optimal up to an additive n*step.
inline AdditiveResult additive_auction(const mwm::BipartiteGraph& g, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("additive_auction: step must be positive");
  std::vector<double> y(static_cast<std::size_t>(g.n_u()), 0.0);
  std::vector<int> match_u(static_cast<std::size_t>(g.n_u()), -1);
  std::vector<int> match_v(static_cast<std::size_t>(g.n_v()), -1);
  std::vector<int> pending;
  for (int v = g.n_v() - 1; v >= 0; --v) pending.push_back(v);

  std::uint64_t guard = static_cast<std::uint64_t>(g.n_u()) + 16;
  for (int u = 0; u < g.n_u(); ++u) {
    double wu = 0.0;
    for (int e : g.adj_u(u)) wu = std::max(wu, g.edge(e).w);
    guard += static_cast<std::uint64_t>(wu / step) + 2;
  }
  guard = guard * 2 + static_cast<std::uint64_t>(g.n_v());

  std::uint64_t rounds = 0;
  while (!pending.empty()) {
    const int v = pending.back();
    pending.pop_back();
    if (++rounds > guard) throw std::logic_error("additive_auction: exceeded round guard");
    int best_u = -1, best_e = -1;
    double best = 0.0;
    for (int e : g.adj_v(v)) {
      const mwm::Edge& ed = g.edge(e);
      const double util = ed.w - y[ed.u];
      if (best_u < 0 || util > best) {
        best = util;
        best_u = ed.u;
        best_e = e;
      }
    }
    if (best_u < 0 || best < 0.0) continue;  // prices only rise: v is done for good
    const int old_v = match_u[best_u];
    if (old_v >= 0) {
      match_v[old_v] = -1;
      pending.push_back(old_v);
    }
    match_u[best_u] = v;
    match_v[v] = best_e;
    y[best_u] += step;
  }

  std::vector<mwm::MatchedPair> pairs;
  for (int v = 0; v < g.n_v(); ++v)
    if (match_v[v] >= 0) {
      const mwm::Edge& e = g.edge(match_v[v]);
      pairs.push_back(mwm::MatchedPair{e.u, v, e.w, match_v[v]});
    }
  return AdditiveResult{mwm::Matching(std::move(pairs)), rounds};
}

struct BenchCell {
  int n_u = 0;
  int n_v = 0;
  long long m = 0;
  double w_max = 0.0;
  double eps_prime = 0.0;
  bool integer_weights = false;
};

// Config lines: `<n_u> <n_v> <m> <w_max> <eps_prime> [int|real]`, `#` comments.
inline std::vector<BenchCell> parse_bench_config(std::istream& in) {
  std::vector<BenchCell> cells;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    BenchCell c;
    std::string kind = "real";
    if (!(is >> c.n_u >> c.n_v >> c.m >> c.w_max >> c.eps_prime))
      throw std::runtime_error("bench config line " + std::to_string(lineno) +
                               ": expected '<n_u> <n_v> <m> <w_max> <eps_prime> [int|real]'");
    is >> kind;
    if (kind == "int")
      c.integer_weights = true;
    else if (kind != "real")
      throw std::runtime_error("bench config line " + std::to_string(lineno) + ": weight kind must be 'int' or 'real'");
    if (!(c.eps_prime > 0.0 && c.eps_prime < 1.0))
      throw std::runtime_error("bench config line " + std::to_string(lineno) + ": eps_prime must lie in (0,1)");
    cells.push_back(c);
  }
  return cells;
}

struct BenchRow {
  BenchCell cell;
  std::string algo;
  double wall_ms = 0.0;
  std::uint64_t counter = 0;  // pops (multiplicative) or rounds (additive)
  std::uint64_t counter_bound = 0;
  double weight = 0.0;
  std::optional<double> ratio;
  int k_min = 0;
  int k_max = 0;
};

inline BenchRow run_bench_cell(const BenchCell& c, const std::string& algo, std::uint64_t seed, bool with_oracle,
                               int oracle_cap = 2000) {
  const mwm::BipartiteGraph g = mwm::gen_random(c.n_u, c.n_v, c.m, c.w_max, seed, c.integer_weights);
  BenchRow row;
  row.cell = c;
  row.algo = algo;
  const auto t0 = std::chrono::steady_clock::now();
  if (algo == "multiplicative") {
    const mwm::SolveResult r = mwm::solve(g, c.eps_prime);
    row.counter = r.state.pop_count;
    row.counter_bound = r.state.pair_count();
    row.weight = r.matching.total_weight();
    row.k_min = r.state.cfg.k_min();
    row.k_max = r.state.cfg.k_max();
  } else if (algo == "additive") {
    const AdditiveResult r = additive_auction(g, c.eps_prime);
    row.counter = r.rounds;
    row.weight = r.matching.total_weight();
  } else {
    throw std::invalid_argument("unknown algo '" + algo + "'");
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (with_oracle && g.n_total() <= oracle_cap) {
    const mwm::OracleResult best = mwm::hungarian_exact(g, oracle_cap);
    if (best.optimal_weight > 0.0) row.ratio = row.weight / best.optimal_weight;
  }
  return row;
}

}  // namespace mwmbench
