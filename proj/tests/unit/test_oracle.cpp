#include <doctest.h>

#include <functional>

#include "fixtures.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/oracle.hpp"
#include "generators.hpp"

using namespace flowlogic;
using namespace flowlogic::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kMalformed;
}

}  // namespace

TEST_CASE("flow enumeration") {
  CHECK(enumerate_flows(single_edge_network(2)).size() == 3);
  FlowNetwork square = two_successor_network();
  auto flows = enumerate_flows(square);
  CHECK(flows.size() == 4);
  for (const auto& f : flows) {
    CHECK(check_flow(square, f).empty());
    bool split = f.vertex_value(square, square.source()) == make_rational(1) &&
                 f.vertex_value(square, *square.find_vertex("u")) > make_rational(0) &&
                 f.vertex_value(square, *square.find_vertex("v")) > make_rational(0);
    CHECK_FALSE(split);
  }
}

TEST_CASE("flow enumeration budget") {
  OracleBudget tiny;
  tiny.flow_space = 10;
  CHECK(code_of([&] { enumerate_flows(diamond_network(), tiny); }) == ErrorCode::kBudgetExceeded);
}

TEST_CASE("brute check") {
  CHECK_FALSE(brute_check(two_successor_network(), parse_formula("Ef(= 1 & A X > 0)")));
  FlowNetwork net = make_network({"s>a:5", "s>b:5", "a>t:5", "b>t:5"}, {"t"});
  CHECK(brute_check(net, parse_formula("A Af(>= 10 -> X >= 4)")));
  CHECK(brute_check(net, parse_formula("EfMax(A X = 5)")));
  CHECK_FALSE(brute_check(net, parse_formula("A Af(>= 6 -> X >= 4)")));
  CHECK(brute_check(net, parse_formula("E Ef(X = 5)")));
  CHECK(brute_check(net, parse_formula("A forall x. Ef(X = x | X < x)")));
  CHECK(code_of([&] { brute_check(net, parse_formula("EfR(= 1)")); }) == ErrorCode::kPrecondition);
  VertexSet set = brute_check_set(net, parse_formula("Ef(>= 5)"));
  CHECK(set[net.source()]);
  CHECK(set[*net.find_vertex("a")]);
}

TEST_CASE("cnf helpers") {
  CnfFormula f{2, {{1, 2}, {-1, 2}}};
  CHECK(satisfies(f, {false, true}));
  CHECK_FALSE(satisfies(f, {true, false}));
  CHECK(brute_force_sat(f));
  CHECK(literal_count(f, 2) == 2);
  CHECK(literal_count(f, -2) == 0);
  CHECK_FALSE(brute_force_sat(CnfFormula{2, {{1}, {-1}}}));
}

TEST_CASE("balancing keeps satisfiability") {
  for (const CnfFormula& f : {CnfFormula{2, {{1, 2}}}, CnfFormula{2, {{1}, {-1}}}, CnfFormula{3, {{1, -2}, {3}}}}) {
    CnfFormula b = balance_cnf(f);
    std::size_t k = literal_count(b, 1);
    for (int i = 1; i <= b.num_variables; ++i) {
      CHECK(literal_count(b, i) == k);
      CHECK(literal_count(b, -i) == k);
    }
    CHECK(brute_force_sat(b).has_value() == brute_force_sat(f).has_value());
  }
  CHECK(code_of([] { balance_cnf(CnfFormula{1, {{1}}}); }) == ErrorCode::kTooFewVariables);
}

TEST_CASE("cnf networks") {
  CHECK(code_of([] { cnf_to_network(CnfFormula{2, {{1, 2}}}); }) == ErrorCode::kNotBalanced);
  CnfInstance inst = cnf_to_network(balance_cnf(CnfFormula{2, {{1, 2}, {-1, 2}}}));
  CHECK(validate(inst.network).empty());
  CHECK(inst.positive_vertex.size() == 2);
  CHECK(check_reduction_cnf(inst.network, inst.formula).satisfied);
  Rng rng(91);
  for (int i = 0; i < 5; ++i) {
    CnfFormula b = balance_cnf(random_3cnf(rng, 3, 3));
    CnfInstance r = cnf_to_network(b);
    CHECK(r.network.num_vertices() == 1 + 3 * 3 + b.clauses.size() + 1);
    CHECK(validate(r.network).empty());
  }
}

TEST_CASE("unwinding") {
  FlowNetwork tree = unwind(diamond_network());
  CHECK(validate(tree).empty());
  CHECK(max_flow(tree).value == 8);
  CHECK(tree.find_vertex("s.v.u"));
  FlowNetwork cyclic = make_network({"s>a:1", "a>b:1", "b>a:1", "b>t:1"}, {"t"});
  CHECK(code_of([&] { unwind(cyclic); }) == ErrorCode::kCyclicFullUnwind);
  FlowNetwork bounded = unwind(cyclic, 5);
  CHECK(validate(bounded).empty());
  CHECK(bounded.find_vertex("s.a.b.t"));
  CHECK(bounded.find_vertex("s.a.b.a.b.t"));
  CHECK_FALSE(bounded.find_vertex("s.a.b.a.b.a"));
}

TEST_CASE("value enumeration") {
  FlowNetwork net = single_edge_network(9);
  auto all = enumerate_value_solutions(net, parse_formula("Ef(= ? & >= 3)"));
  CHECK(all == std::vector<std::int64_t>{3, 4, 5, 6, 7, 8, 9});
  CHECK(code_of([&] { enumerate_value_solutions(net, parse_formula("Ef(>= 1)")); }) ==
        ErrorCode::kNoPlaceholder);
}
