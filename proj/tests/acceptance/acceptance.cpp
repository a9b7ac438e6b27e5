// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flowlogic/cbfl.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/flow.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/network.hpp"
#include "flowlogic/oracle.hpp"
#include "flowlogic/query.hpp"
#include "flowlogic/semantics.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace flowlogic;
using flowlogic::testing::Rng;
using flowlogic::testing::diamond_network;
using flowlogic::testing::single_edge_network;
using flowlogic::testing::two_successor_network;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct Criterion {
  int number;
  std::string title;
  double time_limit;  // seconds; 0 for none
  std::function<Outcome()> run;
};

std::string describe(const FlowNetwork& net, const FormulaPtr& f) {
  return to_string(f) + " on " + serialize_network(net);
}

FlowFunction pick_flow(Rng& rng, const std::vector<FlowFunction>& flows) {
  std::uniform_int_distribution<std::size_t> d(0, flows.size() - 1);
  return flows[d(rng)];
}

Outcome integral_real_separation() {
  Outcome out;
  FlowNetwork net = two_successor_network();
  FormulaPtr integral = parse_formula("Ef(=1 & A X >0)");
  FormulaPtr real = parse_formula("EfR(=1 & A X >0)");
  for (bool general : {true, false}) {
    std::string engine = general ? "general" : "cbfl";
    Verdict a = general ? check(net, integral) : check_cbfl(net, integral);
    Verdict b = general ? check(net, real) : check_cbfl(net, real);
    if (a.satisfied) out.fail(engine + ": integral formula satisfied");
    if (!b.satisfied) out.fail(engine + ": real formula unsatisfied");
    if (!b.witness) {
      out.fail(engine + ": no witness for the real formula");
      continue;
    }
    FlowFunction reloaded = parse_flow(net, serialize_flow(net, *b.witness));
    if (!check_flow(net, reloaded).empty()) out.fail(engine + ": witness does not re-validate");
    if (reloaded.as_integers()) out.fail(engine + ": witness is integral");
    if (!eval_state_set(net, reloaded, real->child())[net.source()]) {
      out.fail(engine + ": body fails under the witness");
    }
  }
  if (out.pass) out.detail = "integral unsatisfied, real satisfied with a rational witness";
  return out;
}

Outcome unwinding_sensitivity() {
  Outcome out;
  FlowNetwork net = diamond_network();
  FlowNetwork tree = unwind(net);
  MaxFlowResult a = max_flow(net);
  MaxFlowResult b = max_flow(tree);
  if (a.value != 7) out.fail("network max flow " + std::to_string(a.value) + ", expected 7");
  if (b.value != 8) out.fail("unwinding max flow " + std::to_string(b.value) + ", expected 8");
  if (!check_flow(net, a.witness).empty()) out.fail("network witness invalid");
  if (!check_flow(tree, b.witness).empty()) out.fail("unwinding witness invalid");
  if (out.pass) out.detail = "max flow 7, unwinding 8";
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  Rng rng(3001);
  int agree = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    FormulaPtr f = testing::random_formula(rng);
    try {
      if (check(net, f).satisfied == brute_check(net, f)) {
        ++agree;
      } else {
        out.fail("disagreement on " + describe(net, f));
      }
    } catch (const Error& e) {
      out.fail(std::string("error ") + e.what() + " on " + to_string(f));
    }
  }
  if (out.pass) out.detail = std::to_string(agree) + "/" + std::to_string(n) + " agree";
  return out;
}

Outcome cbfl_soundness_and_speed() {
  Outcome out;
  Rng rng(4001);
  const int n = 120;
  int agree = 0;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    FormulaPtr f = testing::random_cbfl_formula(rng);
    try {
      if (check_cbfl(net, f).satisfied == check(net, f).satisfied) {
        ++agree;
      } else {
        out.fail("disagreement on " + describe(net, f));
      }
    } catch (const Error& e) {
      out.fail(std::string("error ") + e.what() + " on " + to_string(f));
    }
  }

  FormulaPtr fixed = parse_formula("Ef(>= 2 & A X >= 1 & A X X G <= 3 & A X X (p | EfMax A X > 0))");
  auto measure = [&](std::size_t length) {
    FlowNetwork net = testing::path_network(length, 3);
    double best = 1e9;
    for (int rep = 0; rep < 5; ++rep) {
      auto start = Clock::now();
      check_cbfl(net, fixed);
      best = std::min(best, seconds_since(start));
    }
    return best;
  };
  const std::size_t base = 200;
  double t1 = measure(base);
  double t2 = measure(2 * base);
  double ratio = t2 / t1;
  if (ratio > 8.0) out.fail("scaling ratio " + std::to_string(ratio) + " exceeds 8");
  if (out.pass) {
    std::ostringstream s;
    s << agree << "/" << n << " agree, 2x path scaling ratio " << ratio;
    out.detail = s.str();
  }
  return out;
}

Outcome cnf_reduction() {
  Outcome out;
  std::vector<CnfFormula> cases;
  cases.push_back({3, {{1, 2, 3}}});
  cases.push_back({3, {{1, 2, 3}, {-1, -2, -3}, {1, -2, 3}}});
  CnfFormula unsat{3, {}};
  for (int mask = 0; mask < 8; ++mask) {
    unsat.clauses.push_back({mask & 1 ? 1 : -1, mask & 2 ? 2 : -2, mask & 4 ? 3 : -3});
  }
  cases.push_back(unsat);
  cases.push_back({2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}});
  Rng rng(5001);
  // Half of the random formulas are drawn until unsatisfiable.
  for (int i = 0; i < 30; ++i) {
    bool want_unsat = i % 2 == 1;
    for (;;) {
      int vars = std::uniform_int_distribution<int>(3, want_unsat ? 4 : 5)(rng);
      auto max_clauses = static_cast<std::size_t>(want_unsat ? 6 * vars : 4 * vars);
      auto clauses = std::uniform_int_distribution<std::size_t>(3, max_clauses)(rng);
      CnfFormula f = testing::random_3cnf(rng, vars, clauses);
      if (!want_unsat || !brute_force_sat(f)) {
        cases.push_back(std::move(f));
        break;
      }
    }
  }
  int sat = 0;
  int unsat_count = 0;
  for (const auto& cnf : cases) {
    CnfInstance inst = cnf_to_network(balance_cnf(cnf));
    Verdict v = check_reduction_cnf(inst.network, inst.formula);
    bool expected = brute_force_sat(cnf).has_value();
    (expected ? sat : unsat_count)++;
    if (v.satisfied != expected) {
      out.fail("verdict differs from brute-force SAT on a formula with " +
               std::to_string(cnf.clauses.size()) + " clauses");
      continue;
    }
    if (v.satisfied) {
      if (!v.witness) {
        out.fail("satisfied without a witness");
        continue;
      }
      if (!check_flow(inst.network, *v.witness).empty()) out.fail("witness flow invalid");
      if (!satisfies(cnf, decode_assignment(inst, *v.witness))) {
        out.fail("decoded assignment does not satisfy the formula");
      }
    }
  }
  if (out.pass) {
    out.detail = std::to_string(cases.size()) + " formulas (" + std::to_string(sat) + " SAT, " +
                 std::to_string(unsat_count) + " UNSAT) match";
  }
  return out;
}

FlowFunction lift_to_refined(const FlowFunction& flow) {
  std::vector<std::int64_t> values;
  for (const auto& q : flow.values()) {
    values.push_back(to_int64(q));
    values.push_back(to_int64(q));
  }
  return FlowFunction::integral(std::move(values));
}

Outcome positive_quantifier_equivalence() {
  Outcome out;
  Rng rng(6001);
  const int n = 60;
  int agree = 0;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    auto flows = enumerate_flows(net);
    FlowFunction flow = pick_flow(rng, flows);
    PathQuantifier q = std::bernoulli_distribution(0.5)(rng) ? PathQuantifier::kAPlus : PathQuantifier::kEPlus;
    FormulaPtr phi = substitute_gmax(Formula::path(q, testing::random_path_formula(rng, 4)),
                                     max_flow(net).value);
    VertexSet direct = eval_state_set(net, flow, phi);
    RefinedNetwork refined = refine_for_positive_paths(net);
    VertexSet piped = eval_state_set(refined.network, lift_to_refined(flow),
                                     rewrite_positive_quantifiers(phi, refined.edge_prop));
    bool same = true;
    for (VertexId v = 0; v < net.num_vertices(); ++v) same = same && direct[v] == piped[v];
    if (same) {
      ++agree;
    } else {
      out.fail("disagreement on " + describe(net, phi));
    }
  }
  if (out.pass) out.detail = std::to_string(agree) + "/" + std::to_string(n) + " agree at every vertex";
  return out;
}

Outcome max_quantifier_encoding() {
  Outcome out;
  Rng rng(7001);
  const int n = 60;
  int agree = 0;
  testing::FormulaShape shape;
  shape.max_depth = 3;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    FormulaPtr psi = testing::random_flow_body(rng, shape);
    FormulaPtr direct = Formula::flow(FlowQuantifier::kEfMax, psi);
    FormulaPtr x_prop = Formula::flow_prop(CmpOp::kEq, ValueExpr::variable("x"));
    FormulaPtr bound = Formula::flow(FlowQuantifier::kAf,
                                     Formula::flow_prop(CmpOp::kLe, ValueExpr::variable("x")));
    FormulaPtr encoded = Formula::value(
        ValueQuantifier::kExists, "x",
        Formula::flow(FlowQuantifier::kEf, Formula::conjunction({x_prop, psi, bound})));
    bool a = check(net, direct).satisfied;
    bool b = check(net, encoded).satisfied;
    bool c = brute_check(net, encoded);
    if (a == b && b == c) {
      ++agree;
    } else {
      out.fail("disagreement on " + describe(net, direct));
    }
  }
  if (out.pass) out.detail = std::to_string(agree) + "/" + std::to_string(n) + " agree";
  return out;
}

Outcome value_quantification_bound() {
  Outcome out;
  Rng rng(8001);
  const int n = 30;
  CheckOptions wide;
  wide.value_range_extension = 5;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    FormulaPtr f = testing::random_arith_value_formula(rng);
    if (check(net, f).satisfied != check(net, f, wide).satisfied) {
      out.fail("verdict changes with C_N + 5 on " + describe(net, f));
    }
  }
  if (out.pass) out.detail = std::to_string(n) + " instances, verdict unchanged";
  return out;
}

Outcome query_checking() {
  Outcome out;
  Rng rng(9001);
  const int n = 60;
  testing::FormulaShape shape;
  shape.max_depth = 3;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    FormulaPtr f = testing::random_value_query(rng, shape);
    ValueQuery q = classify_value_query(f);
    auto best = strongest_value_solution(net, q);
    auto all = enumerate_value_solutions(net, f);
    const std::int64_t top = net.capacity_sum();
    if (all.empty()) {
      if (best) out.fail("binary search found a solution the scan did not: " + describe(net, f));
      continue;
    }
    bool lower = q.query_class == QueryClass::kLowerBound;
    std::int64_t extremum = lower ? all.back() : all.front();
    if (!best || best->strongest != extremum) {
      out.fail("binary search differs from the linear scan on " + describe(net, f));
    }
    std::int64_t lo = lower ? 0 : extremum;
    std::int64_t hi = lower ? extremum : top;
    bool interval = static_cast<std::int64_t>(all.size()) == hi - lo + 1 && all.front() == lo &&
                    all.back() == hi;
    if (!interval) out.fail("solution set is not a one-sided interval on " + describe(net, f));
  }
  FlowNetwork cap9 = single_edge_network(9);
  FormulaPtr eq = parse_formula("Ef((= ?) & ((>= 2 & <= 4) | (>= 6 & <= 9)))");
  auto scan = enumerate_value_solutions(
      cap9, eq, [](const FlowNetwork& net, const FormulaPtr& f) { return brute_check(net, f); });
  if (scan != std::vector<std::int64_t>{2, 3, 4, 6, 7, 8, 9}) out.fail("(= ?) scan is not {2,3,4,6,7,8,9}");
  if (out.pass) out.detail = std::to_string(n) + " queries match the scan; (= ?) gives {2,3,4,6,7,8,9}";
  return out;
}

Outcome flow_algorithms() {
  Outcome out;
  Rng rng(10001);
  const int n = 40;
  int feasible = 0;
  for (int i = 0; i < n; ++i) {
    FlowNetwork net = testing::random_network(rng);
    auto flows = enumerate_flows(net);
    std::int64_t best = 0;
    for (const auto& f : flows) best = std::max(best, to_int64(f.vertex_value(net, net.source())));
    MaxFlowResult mf = max_flow(net);
    if (mf.value != best) out.fail("max flow differs from enumeration on " + serialize_network(net));
    if (!mf.witness.as_integers() || !check_flow(net, mf.witness).empty()) {
      out.fail("max flow witness not an integral flow");
    }
    if (to_int64(mf.witness.vertex_value(net, net.source())) != mf.value) {
      out.fail("max flow witness value differs");
    }

    for (int trial = 0; trial < 5; ++trial) {
      std::vector<VertexRange> ranges(net.num_vertices(), VertexRange::unbounded());
      for (VertexId v = 0; v < net.num_vertices(); ++v) {
        if (!std::bernoulli_distribution(0.5)(rng)) continue;
        std::int64_t lo = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
        std::int64_t hi = lo + std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
        ranges[v] = VertexRange::closed(lo, hi);
      }
      bool expected = std::any_of(flows.begin(), flows.end(), [&](const FlowFunction& f) {
        for (VertexId v = 0; v < net.num_vertices(); ++v) {
          if (!ranges[v].contains(f.vertex_value(net, v))) return false;
        }
        return true;
      });
      ConstrainedFlowResult r = vertex_constrained_flow(net, ranges);
      if (r.feasible() != expected) {
        out.fail("vertex-constrained feasibility differs on " + serialize_network(net));
        continue;
      }
      if (!r.feasible()) continue;
      ++feasible;
      if (!r.flow || !r.flow->as_integers() || !check_flow(net, *r.flow).empty()) {
        out.fail("vertex-constrained flow not an integral flow");
        continue;
      }
      for (VertexId v = 0; v < net.num_vertices(); ++v) {
        if (!ranges[v].contains(r.flow->vertex_value(net, v))) out.fail("vertex-constrained flow leaves a range");
      }
    }
  }
  if (out.pass) {
    out.detail = std::to_string(n) + " networks, " + std::to_string(n * 5) + " constraint sets (" +
                 std::to_string(feasible) + " feasible) match";
  }
  return out;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "integral/real separation", 1.0, integral_real_separation},
      {2, "unwinding sensitivity", 1.0, unwinding_sensitivity},
      {3, "oracle equivalence", 60.0, oracle_equivalence},
      {4, "conjunctive fragment soundness and speed", 60.0, cbfl_soundness_and_speed},
      {5, "CNF reduction", 60.0, cnf_reduction},
      {6, "positive path quantifiers", 0.0, positive_quantifier_equivalence},
      {7, "maximal flow quantifier encoding", 0.0, max_quantifier_encoding},
      {8, "value quantification bound", 0.0, value_quantification_bound},
      {9, "query checking", 0.0, query_checking},
      {10, "max flow and vertex-constrained flow", 0.0, flow_algorithms},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double elapsed = seconds_since(start);
    if (c.time_limit > 0 && elapsed >= c.time_limit) {
      o.fail("took " + std::to_string(elapsed) + " s, limit " + std::to_string(c.time_limit) + " s");
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.number << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title
              << " - " << o.detail << " [" << elapsed << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
