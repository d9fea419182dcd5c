// mwm/replay.hpp -- drives a DynamicMatcher from a parsed ops script, with
// optional per-op invariant verification and fresh exact re-solves.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mwm/dynamic.hpp"
#include "mwm/graph_io.hpp"
#include "mwm/oracle.hpp"
#include "mwm/verify.hpp"

namespace mwm {

struct ReplayOptions {
  bool verify_each = false;  // invariant suite after every op
  bool oracle_each = false;  // Hungarian on the alive graph after every op
  int oracle_cap = 2000;
};

struct OpRecord {
  int index = 0;
  int line = 0;
  std::string description;
  MatchingDelta delta;
  double weight_after = 0.0;
  std::optional<double> oracle_weight;
  std::optional<double> ratio;
  std::optional<bool> verify_pass;
  std::optional<VerificationReport> report;
};

struct ReplayResult {
  std::vector<OpRecord> records;
  Matching final_matching;
};

// Script semantic errors (dangling indices, weights out of range) surface as
// parse_error carrying the offending op's line number.
inline ReplayResult replay(DynamicMatcher& dm, const OpsScript& script, const ReplayOptions& opt = {}) {
  ReplayResult out;
  int index = 0;
  for (const DynOp& op : script.ops) {
    OpRecord rec;
    rec.index = index++;
    try {
      if (const DeleteU* del = std::get_if<DeleteU>(&op)) {
        rec.line = del->line;
        rec.description = "del " + std::to_string(del->u);
        rec.delta = dm.delete_u(del->u);
      } else {
        const InsertV& ins = std::get<InsertV>(op);
        rec.line = ins.line;
        auto [v, delta] = dm.insert_v(ins.edges);
        rec.description = "add " + ins.label + " -> v" + std::to_string(v);
        rec.delta = std::move(delta);
      }
    } catch (const std::invalid_argument& ex) {
      throw parse_error(rec.line, ex.what());
    }
    rec.weight_after = rec.delta.new_total_weight;
    if (opt.verify_each) {
      rec.report = run_invariant_suite(dm.state());
      rec.verify_pass = rec.report->all_passed();
    }
    if (opt.oracle_each) {
      const OracleResult best = hungarian_exact(dm.alive_graph(), opt.oracle_cap);
      rec.oracle_weight = best.optimal_weight;
      rec.ratio = approx_ratio(dm.current_matching(), best.matching);
    }
    out.records.push_back(std::move(rec));
  }
  out.final_matching = dm.current_matching();
  return out;
}

}  // namespace mwm
