#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>

#include "mwm/dynamic.hpp"
#include "mwm/generator.hpp"
#include "mwm/oracle.hpp"
#include "mwm/replay.hpp"
#include "mwm/verify.hpp"

using namespace mwm;

namespace {

// Rescale weights into [lo, hi] so nothing falls under the matcher's fixed
// drop threshold; keeps the exact-oracle comparisons meaningful.
BipartiteGraph banded(const BipartiteGraph& g, double lo, double hi) {
  std::vector<Edge> edges;
  const double w_max = std::max(g.max_weight(), 1.0);
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, lo + (e.w / w_max) * (hi - lo)});
  return BipartiteGraph(g.n_u(), g.n_v(), std::move(edges));
}

double band_weight(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() % 1000000) + 1.0) / 1000000.0;
}

}  // namespace

TEST_CASE("construction mirrors the static solve when caps equal the instance") {
  const BipartiteGraph g = gen_random(10, 10, 55, 1000.0, 8);
  const EpsilonConfig cfg(0.2, g.n_total());
  SolveResult stat = solve(g, cfg);
  DynamicMatcher dm(g, {0.2, g.max_weight(), 0.0, g.n_total()});
  const Matching dyn = dm.current_matching();
  REQUIRE(dyn.size() == stat.matching.size());
  CHECK(dyn.total_weight() == stat.matching.total_weight());
  CHECK(dm.state().pop_count == stat.state.pop_count);
  for (int u = 0; u < g.n_u(); ++u) CHECK(dm.state().y[u] == stat.state.y[u]);
}

TEST_CASE("construction validates caps") {
  const BipartiteGraph g(1, 1, {{0, 0, 5.0}});
  CHECK_THROWS_AS(DynamicMatcher(g, {0.2, 0.0, 0.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(DynamicMatcher(g, {0.2, 4.9, 0.0, 0}), std::invalid_argument);  // initial edge over cap
  CHECK_NOTHROW(DynamicMatcher(g, {0.2, 5.0, 0.0, 0}));
}

TEST_CASE("empty initial graph is a valid starting state") {
  const BipartiteGraph g(3, 0, {});
  DynamicMatcher dm(g, {0.25, 10.0, 0.0, 0});
  CHECK(dm.current_matching().empty());
  auto [v, delta] = dm.insert_v(std::vector<std::pair<int, double>>{{1, 9.0}});
  CHECK(v == 0);
  REQUIRE(delta.added.size() == 1);
  CHECK(delta.added[0].u == 1);
  CHECK(dm.state().y[1] > 0.0);
  CHECK(run_invariant_suite(dm.state()).all_passed());
}

TEST_CASE("delete_u on an unmatched vertex changes nothing") {
  const BipartiteGraph g(2, 1, {{0, 0, 10.0}, {1, 0, 1.0}});
  DynamicMatcher dm(g, {0.2, 10.0, 0.0, 0});
  REQUIRE(dm.current_matching().size() == 1);
  const int unmatched_u = dm.state().match_u[0] >= 0 ? 1 : 0;
  const MatchingDelta d = dm.delete_u(unmatched_u);
  CHECK(d.empty());
  CHECK(dm.current_matching().size() == 1);
  CHECK(run_invariant_suite(dm.state()).all_passed());
}

TEST_CASE("delete_u removes the matched pair") {
  const BipartiteGraph g(1, 1, {{0, 0, 5.0}});
  DynamicMatcher dm(g, {0.2, 5.0, 0.0, 0});
  const MatchingDelta d = dm.delete_u(0);
  REQUIRE(d.removed.size() == 1);
  CHECK(d.added.empty());
  CHECK(d.new_total_weight == 0.0);
  CHECK(dm.current_matching().empty());
  CHECK_THROWS_AS(dm.delete_u(0), std::invalid_argument);  // double delete
  CHECK_THROWS_AS(dm.delete_u(7), std::invalid_argument);
}

TEST_CASE("delete_u re-matches the widowed buyer") {
  const BipartiteGraph g(2, 2, {{0, 0, 10.0}, {0, 1, 9.0}, {1, 0, 8.0}});
  DynamicMatcher dm(g, {0.2, 10.0, 0.0, 0});
  dm.delete_u(0);
  const Matching after = dm.current_matching();
  const BipartiteGraph alive = dm.alive_graph();
  const double best = brute_force_exact(alive).optimal_weight;  // 8 remains
  CHECK(best == 8.0);
  CHECK(after.total_weight() >= (1.0 - 0.2) * best - 1e-9);
  CHECK(run_invariant_suite(dm.state()).all_passed());
}

TEST_CASE("insert_v edge cases and validation") {
  const BipartiteGraph g(3, 1, {{0, 0, 6.0}});
  DynamicMatcher dm(g, {0.25, 10.0, 0.0, 0});

  SECTION("zero edges: allocated but unmatched") {
    auto [v, delta] = dm.insert_v({});
    CHECK(v == 1);
    CHECK(delta.empty());
    CHECK(dm.state().match_v[v] == -1);
    CHECK(run_invariant_suite(dm.state()).all_passed());
  }
  SECTION("single edge to a free good") {
    auto [v, delta] = dm.insert_v(std::vector<std::pair<int, double>>{{1, 7.0}});
    REQUIRE(delta.added.size() == 1);
    CHECK(delta.added[0].u == 1);
    CHECK(delta.added[0].v == v);
    CHECK(dm.state().y[1] > 0.0);
  }
  SECTION("rejects bad input") {
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{5, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{0, 11.0}}), std::invalid_argument);
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{0, 1.0}, {1, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{0, 2.0}, {0, 1.0}}), std::invalid_argument);
    dm.delete_u(2);
    CHECK_THROWS_AS(dm.insert_v(std::vector<std::pair<int, double>>{{2, 1.0}}), std::invalid_argument);
  }
  SECTION("unsorted input accepted via the sorting path") {
    auto [v, delta] = dm.insert_v(std::vector<std::pair<int, double>>{{0, 1.0}, {1, 2.0}}, /*presorted=*/false);
    CHECK(dm.state().match_v[v] >= 0);
    CHECK(check_queue_order(dm.state()).pass);
  }
}

TEST_CASE("insert_v triggers a displacement chain and keeps the guarantee") {
  const BipartiteGraph g(2, 2, {{0, 0, 5.0}, {1, 1, 5.0}, {0, 1, 4.9}, {1, 0, 4.9}});
  DynamicMatcher dm(g, {0.2, 10.0, 0.0, 0});
  REQUIRE(dm.current_matching().size() == 2);
  auto [v, delta] = dm.insert_v(std::vector<std::pair<int, double>>{{0, 10.0}});
  CHECK(dm.state().match_v[v] >= 0);
  CHECK(delta.added.size() + delta.removed.size() >= 2);  // the new buyer displaced someone
  const double best = brute_force_exact(dm.alive_graph()).optimal_weight;
  CHECK(dm.current_matching().total_weight() >= (1.0 - 0.2) * best - 1e-9);
  CHECK(run_invariant_suite(dm.state()).all_passed());
}

TEST_CASE("sub-threshold inserts are dropped, not matched") {
  const BipartiteGraph g(2, 1, {{0, 0, 100.0}});
  DynamicMatcher dm(g, {0.5, 100.0, 0.0, 2 * 3});  // threshold = 0.5*100/6 = 8.33
  const std::size_t edges_before = dm.state().edges.size();
  auto [v, delta] = dm.insert_v(std::vector<std::pair<int, double>>{{1, 5.0}});
  CHECK(delta.empty());
  CHECK(dm.state().match_v[v] == -1);
  CHECK(dm.state().edges.size() == edges_before);
  CHECK(dm.alive_graph().m() == 2);  // still part of the surviving graph
  CHECK(run_invariant_suite(dm.state()).all_passed());
}

TEST_CASE("deleting all of U empties the matching and freezes prices") {
  const BipartiteGraph g = banded(gen_random(6, 6, 20, 100.0, 51), 40.0, 100.0);
  DynamicMatcher dm(g, {0.25, 100.0, 0.0, 0});
  std::vector<double> frozen(6, -1.0);
  for (int u = 0; u < 6; ++u) {
    dm.delete_u(u);
    frozen[u] = dm.state().y[u];
    for (int prev = 0; prev < u; ++prev) CHECK(dm.state().y[prev] == frozen[prev]);
    CHECK(run_invariant_suite(dm.state()).all_passed());
  }
  CHECK(dm.current_matching().empty());
}

TEST_CASE("deltas compose to the current matching across a random script") {
  const BipartiteGraph g = banded(gen_random(8, 8, 30, 100.0, 60), 30.0, 100.0);
  DynamicMatcher dm(g, {0.25, 100.0, 0.0, 0});
  std::map<std::pair<int, int>, double> view;
  const Matching initial = dm.current_matching();
  for (const MatchedPair& p : initial.pairs()) view[{p.u, p.v}] = p.w;

  std::mt19937_64 rng(99);
  std::vector<int> alive_u = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<double> y_before = dm.state().y;
  for (int step = 0; step < 40; ++step) {
    MatchingDelta d;
    if (!alive_u.empty() && rng() % 2 == 0) {
      const std::size_t pick = rng() % alive_u.size();
      d = dm.delete_u(alive_u[pick]);
      alive_u.erase(alive_u.begin() + static_cast<long>(pick));
    } else {
      std::vector<std::pair<int, double>> edges;
      for (int u : alive_u)
        if (rng() % 3 == 0) edges.push_back({u, band_weight(rng, 30.0, 100.0)});
      std::stable_sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.second > b.second; });
      d = dm.insert_v(edges).second;
    }
    for (const MatchedPair& p : d.removed) {
      REQUIRE(view.count({p.u, p.v}) == 1);
      view.erase({p.u, p.v});
    }
    for (const MatchedPair& p : d.added) {
      REQUIRE(view.count({p.u, p.v}) == 0);
      view[{p.u, p.v}] = p.w;
    }
    const Matching cur = dm.current_matching();
    REQUIRE(view.size() == cur.size());
    double total = 0.0;
    for (const MatchedPair& p : cur.pairs()) {
      REQUIRE(view.count({p.u, p.v}) == 1);
      total += p.w;
    }
    CHECK(total == Catch::Approx(d.new_total_weight).margin(1e-9));

    // prices never decrease across operations
    for (std::size_t u = 0; u < y_before.size(); ++u) CHECK(dm.state().y[u] >= y_before[u]);
    y_before = dm.state().y;
  }
}

TEST_CASE("interleaved ops stay near the moving optimum") {
  const double eps_prime = 0.25;
  const BipartiteGraph g0 = banded(gen_random(12, 12, 60, 100.0, 77), 25.0, 100.0);
  DynamicMatcher dm(g0, {eps_prime, 100.0, 0.0, 0});
  std::mt19937_64 rng(123);
  std::vector<int> alive_u;
  for (int u = 0; u < 12; ++u) alive_u.push_back(u);

  for (int step = 0; step < 60; ++step) {
    if (!alive_u.empty() && rng() % 3 == 0) {
      const std::size_t pick = rng() % alive_u.size();
      dm.delete_u(alive_u[pick]);
      alive_u.erase(alive_u.begin() + static_cast<long>(pick));
    } else {
      std::vector<std::pair<int, double>> edges;
      for (int u : alive_u)
        if (rng() % 4 == 0) edges.push_back({u, band_weight(rng, 25.0, 100.0)});
      std::stable_sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.second > b.second; });
      dm.insert_v(edges);
    }
    REQUIRE(run_invariant_suite(dm.state()).all_passed());
    const double best = hungarian_exact(dm.alive_graph()).optimal_weight;
    const double got = dm.current_matching().total_weight();
    CHECK(got >= (1.0 - eps_prime) * best - 1e-9 * std::max(1.0, best));
  }
  CHECK(dm.state().pop_count <= dm.theoretical_pop_budget());
  CHECK(dm.state().pair_count() <= dm.theoretical_pop_budget());
}

TEST_CASE("replay runs scripts and reports per-op records") {
  const BipartiteGraph g = parse_graph("p bip 2 2 3\ne 0 0 10\ne 0 1 9\ne 1 0 8\n");
  const OpsScript script = parse_ops_script("del 0\nadd x 1 7.5\ndel 1\n");
  DynamicMatcher dm(g, {0.2, 10.0, 0.0, 0});
  ReplayOptions opts;
  opts.verify_each = true;
  opts.oracle_each = true;
  const ReplayResult res = replay(dm, script, opts);
  REQUIRE(res.records.size() == 3);
  for (const OpRecord& rec : res.records) {
    CHECK(*rec.verify_pass);
    CHECK(*rec.ratio >= 0.8 - 1e-9);
  }
  CHECK(res.records[2].weight_after == 0.0);  // both goods deleted
  CHECK(res.final_matching.empty());
}

TEST_CASE("replay surfaces script semantic errors with line numbers") {
  const BipartiteGraph g = parse_graph("p bip 1 1 1\ne 0 0 5\n");
  const OpsScript script = parse_ops_script("del 0\n# gap\ndel 0\n");
  DynamicMatcher dm(g, {0.2, 5.0, 0.0, 0});
  try {
    replay(dm, script, {});
    FAIL("expected parse_error");
  } catch (const parse_error& ex) {
    CHECK(ex.line() == 3);
  }
}
