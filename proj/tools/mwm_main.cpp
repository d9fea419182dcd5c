// tools/mwm_main.cpp -- command-line front end: solve graph files, replay
// dynamic ops scripts, generate instances, and benchmark the multiplicative
// solver against the additive baseline.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bench_core.hpp"
#include "mwm/mwm.hpp"

namespace {

using nlohmann::json;

constexpr int kExitVerifyFailure = 1;
constexpr int kExitInputError = 2;

std::ifstream open_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(kExitInputError);
  }
  return in;
}

json verify_json(const mwm::VerificationReport& rep, std::optional<bool> paths_pass) {
  json j;
  j["inv1"] = rep.find("invariant-1")->pass;
  j["inv2"] = rep.find("invariant-2")->pass;
  j["inv3"] = rep.find("invariant-3")->pass;
  j["inv4"] = rep.find("invariant-4")->pass;
  j["dual"] = rep.find("dual-feasibility")->pass;
  j["paths"] = paths_pass ? json(*paths_pass) : json(nullptr);
  return j;
}

struct SolveArgs {
  std::string graph_file;
  double eps_prime = 0.1;
  double eps_internal = 0.0;
  bool verify = false;
  bool oracle = false;
  bool emit_json = false;
  bool emit_matching = false;
  int oracle_cap = 2000;
};

int run_solve(const SolveArgs& a) {
  auto in = open_or_die(a.graph_file);
  const mwm::BipartiteGraph g = mwm::parse_graph(in);
  const mwm::EpsilonConfig cfg = a.eps_internal > 0.0
                                     ? mwm::EpsilonConfig(a.eps_prime, a.eps_internal, std::max(g.n_total(), 1))
                                     : mwm::EpsilonConfig(a.eps_prime, std::max(g.n_total(), 1));
  const mwm::SolveResult r = mwm::solve(g, cfg);

  std::optional<double> oracle_weight, ratio;
  std::optional<bool> paths_pass;
  mwm::VerificationReport rep;
  if (a.oracle) {
    const mwm::OracleResult best = mwm::hungarian_exact(g, a.oracle_cap);
    oracle_weight = best.optimal_weight;
    ratio = mwm::approx_ratio(r.matching, best.matching);
  }
  if (a.verify) {
    rep = mwm::run_invariant_suite(r.state);
    if (a.oracle) {
      const mwm::OracleResult rounded_best = mwm::hungarian_exact(mwm::rounded_graph(r.state), a.oracle_cap);
      rep.checks.push_back(mwm::check_alternating_paths(r.state, rounded_best.matching));
      paths_pass = rep.checks.back().pass;
    }
  }

  const bool verified_ok = !a.verify || rep.all_passed();
  if (a.emit_json) {
    json j;
    j["n_u"] = g.n_u();
    j["n_v"] = g.n_v();
    j["m"] = g.m();
    j["eps_prime"] = a.eps_prime;
    j["weight"] = r.matching.total_weight();
    j["oracle_weight"] = oracle_weight ? json(*oracle_weight) : json(nullptr);
    j["ratio"] = ratio ? json(*ratio) : json(nullptr);
    j["pops"] = r.state.pop_count;
    j["k_min"] = r.state.cfg.k_min();
    j["k_max"] = r.state.cfg.k_max();
    j["verify"] = a.verify ? verify_json(rep, paths_pass) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "instance: n_u=" << g.n_u() << " n_v=" << g.n_v() << " m=" << g.m() << '\n'
              << "eps_prime=" << a.eps_prime << " k_min=" << r.state.cfg.k_min() << " k_max=" << r.state.cfg.k_max()
              << '\n'
              << "matching: " << r.matching.size() << " edges, weight " << mwm::format_weight(r.matching.total_weight())
              << '\n'
              << "pops: " << r.state.pop_count << " (bound " << r.state.pair_count() << ")\n";
    if (oracle_weight)
      std::cout << "oracle weight: " << mwm::format_weight(*oracle_weight) << "  ratio: " << *ratio << '\n';
    if (a.verify) std::cout << rep.to_text();
    if (a.emit_matching)
      for (const mwm::MatchedPair& p : r.matching.pairs())
        std::cout << "match " << p.u << ' ' << p.v << ' ' << mwm::format_weight(p.w) << '\n';
  }
  return verified_ok ? 0 : kExitVerifyFailure;
}

struct DynamicArgs {
  std::string graph_file, ops_file;
  double eps_prime = 0.1;
  double w_cap = 0.0;  // 0: derive from instance + script
  int n_cap = 0;
  bool verify_each = false;
  bool oracle_each = false;
  bool emit_json = false;
  int oracle_cap = 2000;
};

int run_dynamic(const DynamicArgs& a) {
  auto gin = open_or_die(a.graph_file);
  const mwm::BipartiteGraph g = mwm::parse_graph(gin);
  auto oin = open_or_die(a.ops_file);
  const mwm::OpsScript script = mwm::parse_ops_script(oin);

  double w_cap = a.w_cap;
  if (!(w_cap > 0.0)) {
    w_cap = g.max_weight();
    for (const mwm::DynOp& op : script.ops)
      if (const mwm::InsertV* ins = std::get_if<mwm::InsertV>(&op))
        for (const auto& [u, w] : ins->edges) w_cap = std::max(w_cap, w);
    if (!(w_cap > 0.0)) w_cap = 1.0;
  }

  mwm::DynamicMatcher dm(g, {a.eps_prime, w_cap, 0.0, a.n_cap});
  const mwm::Matching initial = dm.current_matching();

  mwm::ReplayOptions opts;
  opts.verify_each = a.verify_each;
  opts.oracle_each = a.oracle_each;
  opts.oracle_cap = a.oracle_cap;
  const mwm::ReplayResult res = mwm::replay(dm, script, opts);

  bool all_verified = true;
  for (const mwm::OpRecord& rec : res.records)
    if (rec.verify_pass && !*rec.verify_pass) all_verified = false;

  if (a.emit_json) {
    json j;
    j["n_u"] = g.n_u();
    j["n_v"] = g.n_v();
    j["m"] = g.m();
    j["eps_prime"] = a.eps_prime;
    j["w_cap"] = w_cap;
    j["initial_weight"] = initial.total_weight();
    json ops = json::array();
    for (const mwm::OpRecord& rec : res.records) {
      json o;
      o["index"] = rec.index;
      o["line"] = rec.line;
      o["op"] = rec.description;
      auto pairs_json = [](const std::vector<mwm::MatchedPair>& ps) {
        json arr = json::array();
        for (const mwm::MatchedPair& p : ps) arr.push_back({p.u, p.v, p.w});
        return arr;
      };
      o["removed"] = pairs_json(rec.delta.removed);
      o["added"] = pairs_json(rec.delta.added);
      o["weight"] = rec.weight_after;
      o["oracle_weight"] = rec.oracle_weight ? json(*rec.oracle_weight) : json(nullptr);
      o["ratio"] = rec.ratio ? json(*rec.ratio) : json(nullptr);
      o["verify"] = rec.verify_pass ? json(*rec.verify_pass) : json(nullptr);
      ops.push_back(std::move(o));
    }
    j["ops"] = std::move(ops);
    j["final_weight"] = res.final_matching.total_weight();
    j["pops"] = dm.state().pop_count;
    j["pop_budget"] = dm.theoretical_pop_budget();
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "initial matching: " << initial.size() << " edges, weight "
              << mwm::format_weight(initial.total_weight()) << '\n';
    for (const mwm::OpRecord& rec : res.records) {
      std::cout << "op " << rec.index << " (line " << rec.line << ") " << rec.description << ": removed "
                << rec.delta.removed.size() << " added " << rec.delta.added.size() << " weight "
                << mwm::format_weight(rec.weight_after);
      if (rec.ratio) std::cout << " ratio " << *rec.ratio;
      if (rec.verify_pass) std::cout << (*rec.verify_pass ? " verify PASS" : " verify FAIL");
      std::cout << '\n';
      if (rec.report && !rec.report->all_passed()) std::cout << rec.report->to_text();
    }
    std::cout << "final weight: " << mwm::format_weight(res.final_matching.total_weight()) << " (pops "
              << dm.state().pop_count << " / budget " << dm.theoretical_pop_budget() << ")\n";
  }
  return all_verified ? 0 : kExitVerifyFailure;
}

struct GenArgs {
  std::string out_file;
  int n_u = 0, n_v = 0;
  long long m = 0;
  double w_max = 1.0;
  std::uint64_t seed = 1;
  bool integer_weights = false;
};

int run_gen(const GenArgs& a) {
  const mwm::BipartiteGraph g = mwm::gen_random(a.n_u, a.n_v, a.m, a.w_max, a.seed, a.integer_weights);
  if (a.out_file == "-") {
    mwm::write_graph(g, std::cout);
  } else {
    std::ofstream out(a.out_file);
    if (!out) {
      std::cerr << "error: cannot write '" << a.out_file << "'\n";
      return kExitInputError;
    }
    mwm::write_graph(g, out);
  }
  return 0;
}

struct BenchArgs {
  std::string config_file;
  std::string algo = "both";
  std::uint64_t seed = 1;
  bool with_oracle = false;
  bool emit_json = false;
  int oracle_cap = 2000;
};

int run_bench(const BenchArgs& a) {
  auto in = open_or_die(a.config_file);
  const std::vector<mwmbench::BenchCell> cells = mwmbench::parse_bench_config(in);
  std::vector<std::string> algos;
  if (a.algo == "both")
    algos = {"multiplicative", "additive"};
  else
    algos = {a.algo};

  std::vector<mwmbench::BenchRow> rows;
  std::uint64_t cell_index = 0;
  for (const mwmbench::BenchCell& c : cells) {
    for (const std::string& algo : algos)
      rows.push_back(mwmbench::run_bench_cell(c, algo, a.seed + cell_index, a.with_oracle, a.oracle_cap));
    ++cell_index;
  }

  if (a.emit_json) {
    json arr = json::array();
    for (const mwmbench::BenchRow& r : rows) {
      json j;
      j["n_u"] = r.cell.n_u;
      j["n_v"] = r.cell.n_v;
      j["m"] = r.cell.m;
      j["w_max"] = r.cell.w_max;
      j["eps_prime"] = r.cell.eps_prime;
      j["algo"] = r.algo;
      j["wall_ms"] = r.wall_ms;
      j["counter"] = r.counter;
      j["counter_bound"] = r.counter_bound;
      j["weight"] = r.weight;
      j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
      j["k_min"] = r.k_min;
      j["k_max"] = r.k_max;
      arr.push_back(std::move(j));
    }
    std::cout << arr.dump(2) << '\n';
  } else {
    std::cout << "n_u n_v m w_max eps | algo counter bound wall_ms weight ratio\n";
    for (const mwmbench::BenchRow& r : rows) {
      std::cout << r.cell.n_u << ' ' << r.cell.n_v << ' ' << r.cell.m << ' ' << r.cell.w_max << ' ' << r.cell.eps_prime
                << " | " << r.algo << ' ' << r.counter << ' ';
      if (r.counter_bound)
        std::cout << r.counter_bound;
      else
        std::cout << '-';
      std::cout << ' ' << r.wall_ms << ' ' << mwm::format_weight(r.weight) << ' ';
      if (r.ratio)
        std::cout << *r.ratio;
      else
        std::cout << '-';
      std::cout << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiplicative-auction approximate maximum weight bipartite matching"};
  app.require_subcommand(1);

  auto eps_check = CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::atof(s.c_str());
        if (!(v > 0.0 && v < 1.0)) return "eps must lie strictly between 0 and 1";
        return {};
      },
      "EPS(0,1)");

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve a graph file");
  solve->add_option("graph", sa.graph_file, "graph file")->required();
  solve->add_option("--eps", sa.eps_prime, "target approximation slack eps'")->required()->check(eps_check);
  solve->add_option("--eps-internal", sa.eps_internal, "override internal rounding eps (default eps'/4)")->check(eps_check);
  solve->add_flag("--verify", sa.verify, "run the invariant suite on the final state");
  solve->add_flag("--oracle", sa.oracle, "compare against the exact Hungarian solver");
  solve->add_flag("--json", sa.emit_json, "machine-readable output");
  solve->add_flag("--emit-matching", sa.emit_matching, "print matched edges");
  solve->add_option("--oracle-cap", sa.oracle_cap, "max n_u+n_v for the exact solver");

  DynamicArgs da;
  CLI::App* dyn = app.add_subcommand("dynamic", "replay an ops script against a graph");
  dyn->add_option("graph", da.graph_file, "initial graph file")->required();
  dyn->add_option("ops", da.ops_file, "ops script (del/add lines)")->required();
  dyn->add_option("--eps", da.eps_prime, "target approximation slack eps'")->required()->check(eps_check);
  dyn->add_option("--w-cap", da.w_cap, "declared weight ceiling (default: max weight seen in inputs)");
  dyn->add_option("--n-cap", da.n_cap, "vertex budget fixing the scale (default: 4x initial)");
  dyn->add_flag("--verify-each", da.verify_each, "run the invariant suite after every op");
  dyn->add_flag("--oracle-each", da.oracle_each, "exact re-solve of the alive graph after every op");
  dyn->add_flag("--json", da.emit_json, "machine-readable output");
  dyn->add_option("--oracle-cap", da.oracle_cap, "max n_u+n_v for the exact solver");

  GenArgs ga;
  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("out", ga.out_file, "output file ('-' for stdout)")->required();
  gen->add_option("--nu", ga.n_u, "size of U")->required();
  gen->add_option("--nv", ga.n_v, "size of V")->required();
  gen->add_option("--m", ga.m, "edge count")->required();
  gen->add_option("--wmax", ga.w_max, "maximum weight")->required();
  gen->add_option("--seed", ga.seed, "RNG seed");
  gen->add_flag("--int", ga.integer_weights, "integer weights in [1, wmax]");

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark grid");
  bench->add_option("--config", ba.config_file, "grid file: n_u n_v m w_max eps [int|real] per line")->required();
  bench->add_option("--algo", ba.algo, "multiplicative|additive|both")
      ->check(CLI::IsMember({"multiplicative", "additive", "both"}));
  bench->add_option("--seed", ba.seed, "base RNG seed");
  bench->add_flag("--oracle", ba.with_oracle, "report exact ratios");
  bench->add_flag("--json", ba.emit_json, "machine-readable output");
  bench->add_option("--oracle-cap", ba.oracle_cap, "max n_u+n_v for the exact solver");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(sa);
    if (*dyn) return run_dynamic(da);
    if (*gen) return run_gen(ga);
    if (*bench) return run_bench(ba);
  } catch (const mwm::parse_error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitInputError;
  }
  return 0;
}
