#include <doctest.h>

#include "fixtures.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/oracle.hpp"
#include "flowlogic/semantics.hpp"
#include "generators.hpp"

using namespace flowlogic;
using namespace flowlogic::testing;

namespace {

FlowNetwork job_network(bool w1_has_car) {
  std::vector<std::string> labels{"j1:a", "j2:b", "j3:a"};
  if (w1_has_car) labels.push_back("w1:car");
  return make_network({"s>w1:2", "s>w2:2", "w1>j1:1", "w1>j2:1", "w2>j3:1", "j1>t:1", "j2>t:1", "j3>t:1"},
                      {"t"}, {"a", "b", "car"}, labels);
}

VertexSet only(const FlowNetwork& net, std::initializer_list<const char*> names) {
  VertexSet out(net.num_vertices(), false);
  for (const char* n : names) out[*net.find_vertex(n)] = true;
  return out;
}

FlowFunction zero_flow(const FlowNetwork& net) {
  return FlowFunction::integral(std::vector<std::int64_t>(net.num_edges(), 0));
}

}  // namespace

TEST_CASE("atoms and flow propositions") {
  FlowNetwork net = make_network({"s>a:3", "a>t:3"}, {"t"}, {"p"}, {"a:p"});
  FlowFunction f = FlowFunction::integral({3, 3});
  CHECK(eval_state_set(net, f, parse_formula("p")) == only(net, {"a"}));
  CHECK(eval_state_set(net, f, parse_formula(">= 2")) == only(net, {"s", "a", "t"}));
  CHECK(eval_state_set(net, FlowFunction::integral({1, 1}), parse_formula(">= 2")) == only(net, {}));
}

TEST_CASE("two successors at capacity five") {
  FlowNetwork net = make_network({"s>a:5", "s>b:5", "a>t:5", "b>t:5"}, {"t"});
  FlowFunction f = FlowFunction::integral({5, 5, 5, 5});
  CHECK(eval_state_set(net, f, parse_formula("A (>= 10 -> X >= 4)"))[net.source()]);
  FlowFunction skew = FlowFunction::integral({3, 5, 3, 5});
  CHECK(eval_state_set(net, skew, parse_formula("A (>= 8 -> X >= 4)"))[net.source()] == false);
}

TEST_CASE("strong next at targets") {
  FlowNetwork net = chain_network();
  FlowFunction f = zero_flow(net);
  VertexId t = *net.find_vertex("t");
  CHECK_FALSE(eval_state_set(net, f, parse_formula("E X true"))[t]);
  CHECK(eval_state_set(net, f, parse_formula("A !(X true)"))[t]);
  CHECK_FALSE(eval_state_set(net, f, parse_formula("A X true"))[t]);
  CHECK(eval_state_set(net, f, parse_formula("E X true"))[net.source()]);
}

TEST_CASE("eventually through a cycle") {
  FlowNetwork net = make_network({"s>a:1", "a>b:1", "b>a:1", "b>t:1"}, {"t"}, {"p"}, {"a:p"});
  FlowFunction f = zero_flow(net);
  VertexSet direct = eval_path_quantifier(net, flow_valuation(net, f), PathQuantifier::kE, parse_path_formula("F p"));
  CHECK(direct[net.source()]);
  CHECK(direct == brute_path_quantifier(net, f, PathQuantifier::kE, parse_path_formula("F p")));
  VertexSet odd = eval_path_quantifier(net, flow_valuation(net, f), PathQuantifier::kE,
                                       parse_path_formula("X X X X p & !X X X X X X true"));
  CHECK(odd == brute_path_quantifier(net, f, PathQuantifier::kE,
                                     parse_path_formula("X X X X p & !X X X X X X true")));
}

TEST_CASE("past operators") {
  FlowNetwork net = chain_network();
  FlowFunction f = zero_flow(net);
  Valuation val = flow_valuation(net, f);
  CHECK_FALSE(eval_with_past(net, val, PathQuantifier::kE, parse_path_formula("Y true"))[net.source()]);
  CHECK(eval_with_past(net, val, PathQuantifier::kE, parse_path_formula("Y true"))[*net.find_vertex("a")]);
  CHECK_THROWS_AS(eval_with_past(net, val, PathQuantifier::kE, parse_path_formula("Y (F true)")), Error);
  try {
    eval_state_set(net, f, parse_formula("E Y F true"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedNesting);
  }
}

TEST_CASE("transit jobs with branching past") {
  FormulaPtr phi = parse_formula("A X (A+ X (a | A Y car) | A+ X (b | A Y car))");
  for (bool car : {true, false}) {
    CAPTURE(car);
    FlowNetwork net = job_network(car);
    FlowFunction all = max_flow(net).witness;
    REQUIRE(to_int64(all.vertex_value(net, net.source())) == 3);
    CHECK(eval_state_set(net, all, phi)[net.source()] == car);
    CHECK(brute_check_set(net, Formula::flow(FlowQuantifier::kEf,
                                             Formula::conjunction({parse_formula("= 3"), phi})))[net.source()] == car);
  }
}

TEST_CASE("path quantifiers match explicit path enumeration") {
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    FlowNetwork net = random_network(rng);
    auto flows = enumerate_flows(net);
    const FlowFunction& f = flows[std::uniform_int_distribution<std::size_t>(0, flows.size() - 1)(rng)];
    FormulaPtr psi = substitute_gmax(random_path_formula(rng, 4), max_flow(net).value);
    for (PathQuantifier q : {PathQuantifier::kA, PathQuantifier::kE, PathQuantifier::kAPlus, PathQuantifier::kEPlus}) {
      CAPTURE(to_string(Formula::path(q, psi)));
      CHECK(eval_path_quantifier(net, flow_valuation(net, f), q, psi) == brute_path_quantifier(net, f, q, psi));
    }
  }
}

TEST_CASE("universal and existential quantifiers are dual") {
  Rng rng(52);
  for (int i = 0; i < 100; ++i) {
    FlowNetwork net = random_network(rng);
    FlowFunction f = max_flow(net).witness;
    FormulaPtr psi = substitute_gmax(random_path_formula(rng, 4), max_flow(net).value);
    VertexSet a = eval_state_set(net, f, Formula::path(PathQuantifier::kA, psi));
    VertexSet e = eval_state_set(net, f, Formula::path(PathQuantifier::kE, Formula::negation(psi)));
    e.flip();
    CHECK(a == e);
  }
}

TEST_CASE("three-valued bounds bracket every completion") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    FlowNetwork net = random_network(rng);
    auto flows = enumerate_flows(net);
    const FlowFunction& f = flows[std::uniform_int_distribution<std::size_t>(0, flows.size() - 1)(rng)];
    FormulaShape shape;
    shape.positive_path_quantifiers = false;
    FormulaPtr phi = Formula::path(PathQuantifier::kE, substitute_gmax(random_path_formula(rng, 4, shape), 2));
    VertexSet undecided(net.num_vertices(), false);
    for (VertexId v = 0; v < net.num_vertices(); ++v) undecided[v] = std::bernoulli_distribution(0.4)(rng);
    PartialValuation partial;
    partial.flow_prop = [&](VertexId v, CmpOp op, std::int64_t g) -> std::optional<bool> {
      if (undecided[v]) return std::nullopt;
      return compare(to_int64(f.vertex_value(net, v)), op, g);
    };
    StateBounds b = eval_state_bounds(net, partial, phi);
    VertexSet exact = eval_state_set(net, f, phi);
    for (VertexId v = 0; v < net.num_vertices(); ++v) {
      CHECK((!b.must[v] || exact[v]));
      CHECK((!exact[v] || b.may[v]));
    }
    PartialValuation full;
    full.flow_prop = [&](VertexId v, CmpOp op, std::int64_t g) -> std::optional<bool> {
      return compare(to_int64(f.vertex_value(net, v)), op, g);
    };
    StateBounds d = eval_state_bounds(net, full, phi);
    CHECK(d.must == exact);
    CHECK(d.may == exact);
  }
}

TEST_CASE("quantified subformulas are rejected") {
  FlowNetwork net = chain_network();
  CHECK_THROWS_AS(eval_state_set(net, zero_flow(net), parse_formula("Ef(>= 1)")), Error);
}
