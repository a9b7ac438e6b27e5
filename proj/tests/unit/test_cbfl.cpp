#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "flowlogic/cbfl.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/oracle.hpp"
#include "generators.hpp"

using namespace flowlogic;
using namespace flowlogic::testing;

namespace {

const CbflFormula* first_block(const CbflPtr& f) {
  if (f->kind == CbflFormula::Kind::kExists) return f.get();
  for (const auto& c : f->children) {
    if (const CbflFormula* b = first_block(c)) return b;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("constraint extraction") {
  FlowNetwork net = make_network({"s>a:9", "a>b:9", "b>t:9"}, {"t"}, {"p"}, {"b:p"});
  CbflPtr nf = normalize_cbfl(parse_formula("Ef(A X X p & A X X > 5 & A G <= 8)"));
  CbflLabels labels;
  eval_cbfl(net, nf, labels);
  const CbflFormula* block = first_block(nf);
  REQUIRE(block);
  ConstraintSheet sheet = extract_constraints(net, net.source(), *block->block, labels);
  REQUIRE_FALSE(sheet.refuted);
  VertexId b = *net.find_vertex("b");
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    CAPTURE(net.vertex_name(v));
    REQUIRE(sheet.ranges[v].hi);
    CHECK(*sheet.ranges[v].hi == 8);
  }
  CHECK(sheet.ranges[b].lo == 5);
  CHECK(sheet.ranges[b].lo_strict);
  CHECK(sheet.ranges[b].integerized().lo == 6);
  CHECK(sheet.required[b].size() == 3);
  CHECK(std::find(sheet.required[b].begin(), sheet.required[b].end(), "p") != sheet.required[b].end());
  CHECK(sheet.required[*net.find_vertex("a")].size() == 1);
}

TEST_CASE("a missing proposition refutes the block") {
  FlowNetwork net = make_network({"s>a:9", "a>b:9", "b>t:9"}, {"t"}, {"p"}, {"a:p"});
  CbflPtr nf = normalize_cbfl(parse_formula("Ef(A X X p & >= 1)"));
  CbflLabels labels;
  eval_cbfl(net, nf, labels);
  ConstraintSheet sheet = extract_constraints(net, net.source(), *first_block(nf)->block, labels);
  CHECK(sheet.refuted);
  CHECK_FALSE(sheet.reason.empty());
  CHECK_FALSE(check_cbfl(net, parse_formula("Ef(A X X p & >= 1)")).satisfied);
}

TEST_CASE("agreement with the general checker") {
  FlowNetwork net = make_network({"s>a:10", "s>b:10", "a>t:10", "b>t:10"}, {"t"});
  for (const char* text : {"Af(< 10 -> E X <= 0) & Ef(= 15 & A X >= 1)", "Ef(= 0)", "Ef(= 20 & A X = 10)",
                           "!Ef(= 20 & A X < 10)", "EfR(= 15 & A X > 7)", "Ef(= 15 & A X > 7)"}) {
    CAPTURE(std::string(text));
    FormulaPtr phi = parse_formula(text);
    Verdict v = check_cbfl(net, phi);
    CHECK(v.satisfied == check(net, phi).satisfied);
    if (std::string_view(text).find("fR") == std::string_view::npos) {
      CHECK(v.satisfied == brute_check(net, phi));
    }
  }
  CHECK(check_cbfl(net, parse_formula("Ef(= 0)")).satisfied);
}

TEST_CASE("witnesses") {
  FlowNetwork net = diamond_network();
  Verdict v = check_cbfl(net, parse_formula("Ef(= 7 & A X >= 3)"));
  REQUIRE(v.satisfied);
  REQUIRE(v.witness);
  CHECK(check_flow(net, *v.witness).empty());
  CHECK(v.witness->vertex_value(net, net.source()) == make_rational(7));
}

TEST_CASE("non-conjunctive formulas are rejected") {
  FlowNetwork net = diamond_network();
  try {
    check_cbfl(net, parse_formula("Ef(A (p -> >= 1))"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotNormalForm);
  }
  CHECK_THROWS_AS(check_cbfl(net, parse_formula("Ef(= x)")), Error);
}

TEST_CASE("random conjunctive formulas") {
  Rng rng(71);
  for (int i = 0; i < 120; ++i) {
    FlowNetwork net = random_network(rng);
    FormulaPtr phi = random_cbfl_formula(rng);
    CAPTURE(to_string(phi));
    CHECK(check_cbfl(net, phi).satisfied == check(net, phi).satisfied);
  }
}
