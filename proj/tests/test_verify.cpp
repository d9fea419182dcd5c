#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mwm/auction.hpp"
#include "mwm/generator.hpp"
#include "mwm/oracle.hpp"
#include "mwm/verify.hpp"

using namespace mwm;

namespace {

// One contested good, two buyers: the loser fully exhausts its queue, which
// exercises the truncated-range branch of invariants 1 and 2.
SolveResult contested_pair() {
  const BipartiteGraph g(1, 2, {{0, 0, 4.0}, {0, 1, 4.0}});
  return solve(g, EpsilonConfig(0.75, 0.25, g.n_total()));
}

}  // namespace

TEST_CASE("invariant suite passes on freshly built and solved states") {
  const BipartiteGraph g = gen_random(12, 12, 70, 1000.0, 321);
  const EpsilonConfig cfg(0.3, g.n_total());

  // Invariants 1-4 hold from initialization on (dual feasibility needs every
  // buyer processed first, so it only joins the suite on solved states).
  AuctionState fresh = build_queues(preprocess(g, cfg), cfg);
  CHECK(check_invariant_1(fresh).pass);
  CHECK(check_invariant_2(fresh).pass);
  CHECK(check_invariant_3(fresh).pass);
  CHECK(check_invariant_4(fresh).pass);

  SolveResult r = solve(g, cfg);
  const VerificationReport rep = run_invariant_suite(r.state);
  INFO(rep.to_text());
  CHECK(rep.all_passed());
}

TEST_CASE("invariant 1 rejects a deflated price") {
  SolveResult r = contested_pair();
  REQUIRE(check_invariant_1(r.state).pass);
  r.state.y[0] = 0.0;  // util jumps back to w~ on an exhausted edge
  const CheckResult c = check_invariant_1(r.state);
  CHECK_FALSE(c.pass);
  CHECK(c.worst_margin < 0.0);
  CHECK_FALSE(c.witness.empty());
}

TEST_CASE("invariant 2 rejects an inflated matched price") {
  // v0 holds u0; u1's pairs were never popped, so the competitor bound applies.
  const BipartiteGraph g(2, 1, {{0, 0, 10.0}, {1, 0, 9.99}});
  SolveResult r = solve(g, 0.2);
  REQUIRE(r.matching.size() == 1);
  REQUIRE(check_invariant_2(r.state).pass);
  const int matched_u = r.matching.pairs()[0].u;
  r.state.y[matched_u] = r.state.edges[r.state.match_v[0]].w_tilde * (1.0 - 1e-9);
  const CheckResult c = check_invariant_2(r.state);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.witness.empty());
}

TEST_CASE("invariant 3 rejects stray and missing prices") {
  const BipartiteGraph g(2, 1, {{0, 0, 5.0}});  // u1 isolated
  SolveResult r = solve(g, 0.3);
  REQUIRE(check_invariant_3(r.state).pass);

  SECTION("unmatched vertex with a nonzero price") {
    r.state.y[1] = 0.5;
    CHECK_FALSE(check_invariant_3(r.state).pass);
  }
  SECTION("matched vertex with a zero price") {
    r.state.y[0] = 0.0;
    CHECK_FALSE(check_invariant_3(r.state).pass);
  }
}

TEST_CASE("invariant 4 rejects an unmatched buyer with queue remaining") {
  const BipartiteGraph g(1, 1, {{0, 0, 5.0}});
  SolveResult r = solve(g, EpsilonConfig(0.5, 0.5, g.n_total()));
  REQUIRE(check_invariant_4(r.state).pass);
  // the state right after a deletion, before the restoring re-match
  r.state.match_u[0] = -1;
  r.state.match_v[0] = -1;
  const CheckResult c = check_invariant_4(r.state);
  CHECK_FALSE(c.pass);
  CHECK(c.worst_margin < 0.0);
}

TEST_CASE("dual feasibility rejects a zeroed price") {
  SolveResult r = contested_pair();
  REQUIRE(check_dual_feasibility(r.state).pass);
  r.state.y[0] = 0.0;  // edge to the exhausted buyer loses its certificate
  const CheckResult c = check_dual_feasibility(r.state);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.witness.empty());
}

TEST_CASE("match consistency rejects one-sided edits") {
  SolveResult r = contested_pair();
  REQUIRE(check_match_consistency(r.state).pass);
  r.state.match_u[0] = -1;  // match_v still points at the edge
  CHECK_FALSE(check_match_consistency(r.state).pass);
}

TEST_CASE("queue order rejects an out-of-order pair") {
  const BipartiteGraph g(2, 1, {{0, 0, 6.0}, {1, 0, 2.3}});
  const EpsilonConfig cfg(0.5, 0.5, g.n_total());
  AuctionState st = build_queues(preprocess(g, cfg), cfg);
  REQUIRE(check_queue_order(st).pass);
  std::swap(st.all_pairs[0], st.all_pairs[5]);
  CHECK_FALSE(check_queue_order(st).pass);
}

TEST_CASE("alternating paths: M = M* is a vacuous pass") {
  const BipartiteGraph g(2, 2, {{0, 0, 3.0}, {1, 1, 4.0}});
  SolveResult r = solve(g, 0.2);
  const OracleResult best = hungarian_exact(rounded_graph(r.state));
  const CheckResult c = check_alternating_paths(r.state, best.matching);
  CHECK(c.pass);
}

TEST_CASE("alternating paths verify against the brute-force optimum") {
  for (int t = 0; t < 12; ++t) {
    const int small = 5 + t % 6;
    const BipartiteGraph g = gen_random(small, 10 + t, 4 + (t * 7) % (small * 10), 300.0, 900 + t, true);
    SolveResult r = solve(g, t % 2 ? 0.3 : 0.15);
    const OracleResult best = brute_force_exact(rounded_graph(r.state));
    const CheckResult c = check_alternating_paths(r.state, best.matching);
    INFO(c.witness);
    CHECK(c.pass);
  }
}

TEST_CASE("alternating paths reject a bad matching") {
  const BipartiteGraph g(2, 2, {{0, 0, 1.0}, {0, 1, 10.0}, {1, 0, 10.0}, {1, 1, 1.0}});
  SolveResult r = solve(g, 0.2);
  REQUIRE(r.matching.total_weight() >= 16.0);  // the anti-diagonal pairing

  // force the light diagonal and re-check: the 4-cycle inequality must fail
  auto edge_id = [&r](int u, int v) {
    for (std::size_t e = 0; e < r.state.edges.size(); ++e)
      if (r.state.edges[e].u == u && r.state.edges[e].v == v) return static_cast<int>(e);
    return -1;
  };
  r.state.match_u.assign(2, -1);
  r.state.match_v.assign(2, -1);
  r.state.match_u[0] = r.state.match_v[0] = edge_id(0, 0);
  r.state.match_u[1] = r.state.match_v[1] = edge_id(1, 1);
  const OracleResult best = hungarian_exact(rounded_graph(r.state));
  const CheckResult c = check_alternating_paths(r.state, best.matching);
  CHECK_FALSE(c.pass);
  CHECK(c.witness.find("case 1") != std::string::npos);
}

TEST_CASE("alternating paths reject a non-live m_star") {
  const BipartiteGraph g(2, 2, {{0, 0, 3.0}, {1, 1, 4.0}});
  SolveResult r = solve(g, 0.2);
  const Matching bogus({{0, 1, 1.0, -1}});  // (0,1) is not an edge
  CHECK_THROWS_AS(check_alternating_paths(r.state, bogus), std::invalid_argument);
}

TEST_CASE("checkers are pure reads of the state") {
  const BipartiteGraph g = gen_random(10, 11, 60, 1e5, 44);
  SolveResult r = solve(g, 0.25);
  const OracleResult best = hungarian_exact(rounded_graph(r.state));
  const std::uint64_t before = state_fingerprint(r.state);
  (void)run_invariant_suite(r.state);
  (void)check_alternating_paths(r.state, best.matching);
  (void)approx_ratio(r.matching, best.matching);
  CHECK(state_fingerprint(r.state) == before);
}

TEST_CASE("approx_ratio conventions") {
  const Matching empty;
  CHECK(approx_ratio(empty, empty) == 1.0);
  const Matching m({{0, 0, 8.0, -1}});
  const Matching star({{0, 0, 10.0, -1}});
  CHECK(approx_ratio(m, star) == 0.8);
  CHECK(approx_ratio(m, m) == 1.0);
}

TEST_CASE("dual feasibility implies the (1-2eps) ratio on rounded weights") {
  for (int t = 0; t < 10; ++t) {
    const BipartiteGraph g = gen_random(8 + t, 9, 30 + 4 * t, 1e4, 7000 + t);
    SolveResult r = solve(g, 0.3);
    REQUIRE(check_dual_feasibility(r.state).pass);
    const BipartiteGraph rounded = rounded_graph(r.state);
    const double best = hungarian_exact(rounded).optimal_weight;
    double got = 0.0;
    for (int v = 0; v < r.state.n_v; ++v)
      if (r.state.match_v[v] >= 0) got += r.state.edges[r.state.match_v[v]].w_tilde;
    CHECK(got >= (1.0 - 2.0 * r.state.cfg.eps()) * best - 1e-9 * std::max(1.0, best));
  }
}
