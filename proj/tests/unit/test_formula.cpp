#include <doctest.h>

#include "fixtures.hpp"
#include "flowlogic/cbfl_normal_form.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "flowlogic/maxflow.hpp"
#include "generators.hpp"

using namespace flowlogic;
using namespace flowlogic::testing;

namespace {

bool same(const FormulaPtr& a, const std::string& b) { return equal(a, parse_formula(b)); }

}  // namespace

TEST_CASE("running example parses") {
  FormulaPtr f = parse_formula("Ef (>= 100 & A G (low -> <= 20))");
  REQUIRE(f->kind() == FormulaKind::kFlowQuant);
  CHECK(f->flow_quantifier() == FlowQuantifier::kEf);
  const FormulaPtr& body = f->child();
  REQUIRE(body->kind() == FormulaKind::kAnd);
  CHECK(body->child(0)->kind() == FormulaKind::kFlowProp);
  CHECK(body->child(0)->cmp() == CmpOp::kGe);
  CHECK(body->child(0)->expr()->value == 100);
  const FormulaPtr& a = body->child(1);
  REQUIRE(a->kind() == FormulaKind::kPathQuant);
  CHECK(a->path_quantifier() == PathQuantifier::kA);
  CHECK(a->child()->kind() == FormulaKind::kGlobally);
  CHECK(a->child()->child()->kind() == FormulaKind::kImplies);
}

TEST_CASE("two-successor formula parses and prints") {
  FormulaPtr f = parse_formula("Ef (= 1 & A X > 0)");
  CHECK(to_string(f) == "Ef(= 1 & A X > 0)");
  CHECK(same(f, "Ef(=1 & A X >0)"));
}

TEST_CASE("syntax errors carry the offending position") {
  std::string text = "Ef A (>= 10 -> X >= 4))";
  try {
    parse_formula(text);
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == text.size() - 1);
  }
  CHECK_THROWS_AS(parse_formula("X p"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("p &"), SyntaxError);
  CHECK_THROWS_AS(parse_formula(">= 3 div 0"), SyntaxError);
}

TEST_CASE("keywords") {
  for (const char* text : {"AfMax A G >= 1", "EfMax E F <= gmax - 4", "AfR(> 0)", "EfR(< 1)",
                           "Ef A+ X p", "Ef E+ (p U q)", "forall x. Ef >= x", "exists x. Af <= x * 2 + 1",
                           "Ef(>= ?)", "Ef(<= ?)", "Ef(> ?)", "Ef(< ?)", "Ef(= ?)", "Ef A X ?",
                           "Ef A G (p S q)", "Ef E (Y p)", "Ef(>= 7 div 2)"}) {
    CAPTURE(text);
    FormulaPtr f = parse_formula(text);
    CHECK(equal(parse_formula(to_string(f)), f));
  }
}

TEST_CASE("precedence") {
  CHECK(same(parse_formula("p | q & r -> s"), "(p | (q & r)) -> s"));
  CHECK(same(parse_formula("A(p U q U r)"), "A(p U (q U r))"));
  CHECK(same(parse_formula("A(X p U q)"), "A((X p) U q)"));
  CHECK(same(parse_formula("!p & q"), "(!p) & q"));
}

TEST_CASE("print and parse round trip on random formulas") {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_formula(rng);
    FormulaPtr back = parse_formula(to_string(f));
    CAPTURE(to_string(f));
    CHECK(equal(back, f));
    CHECK(to_string(back) == to_string(f));
  }
}

TEST_CASE("fragment classification") {
  FragmentTag lfl = classify_formula(parse_formula("Af A (>= 10 -> X >= 4)"));
  CHECK(lfl.is_closed);
  CHECK(lfl.is_lfl);
  CHECK(lfl.is_forall_lfl1);
  CHECK(classify_formula(parse_formula("A Af (>= 10 -> X >= 4)")).is_lfl);

  CHECK_FALSE(classify_formula(parse_formula(">= 5")).is_closed);
  CHECK_FALSE(is_closed(parse_formula(">= 5")));
  CHECK_FALSE(closedness_problem(parse_formula(">= 5")).empty());
  CHECK_FALSE(is_closed(parse_formula("Ef(>= x)")));
  CHECK_FALSE(is_closed(parse_formula("A+ X p")));

  FragmentTag cb = classify_formula(parse_formula("Af(<10 -> E X <= 0) & Ef(=15 & A X >= 1)"));
  REQUIRE(cb.cbfl_level.has_value());
  CHECK(*cb.cbfl_level == 1);
  FragmentTag nested = classify_formula(parse_formula("Ef(A X Ef(>= 1))"));
  REQUIRE(nested.cbfl_level.has_value());
  CHECK(*nested.cbfl_level == 2);
  CHECK_FALSE(classify_formula(parse_formula("Ef(A (p U q))")).cbfl_level.has_value());

  CHECK(classify_formula(parse_formula("Ef(>= 2 & A X p)")).is_exists_bfl1);
  CHECK_FALSE(classify_formula(parse_formula("Af(>= 2)")).is_exists_bfl1);
}

TEST_CASE("conjunctive normal form") {
  CHECK(same(to_formula(normalize_cbfl(parse_formula("Ef(A X (p & >5) & A G <= 8)"))),
             "Ef(A X p & A X >5 & A G <= 8)"));
  CHECK(same(to_formula(normalize_cbfl(parse_formula("Ef(A X A X >3)"))), "Ef(A X X >3)"));
  try {
    normalize_cbfl(parse_formula("Ef(A (p U q))"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConjunctive);
  }
  CHECK_THROWS_AS(normalize_cbfl(parse_formula("Ef(E X > 0)")), Error);
  CHECK_THROWS_AS(normalize_cbfl(parse_formula("Ef(A X > 0 | A X p)")), Error);
  CHECK_NOTHROW(normalize_cbfl(parse_formula("Af(<10 -> E X <= 0)")));
}

TEST_CASE("normalization preserves satisfaction") {
  Rng rng(42);
  int normalized = 0;
  for (int i = 0; i < 150; ++i) {
    FlowNetwork net = random_network(rng);
    FormulaPtr f = substitute_gmax(random_formula(rng), max_flow(net).value);
    CbflPtr nf;
    try {
      nf = normalize_cbfl(f);
    } catch (const Error&) {
      continue;
    }
    ++normalized;
    CAPTURE(to_string(f));
    CHECK(check(net, f).satisfied == check(net, to_formula(nf)).satisfied);
  }
  CHECK(normalized >= 10);
  for (int i = 0; i < 100; ++i) {
    FlowNetwork net = random_network(rng);
    FormulaPtr f = random_cbfl_formula(rng);
    CAPTURE(to_string(f));
    CHECK(check(net, f).satisfied == check(net, to_formula(normalize_cbfl(f))).satisfied);
  }
}

TEST_CASE("positive quantifier rewrite") {
  CHECK(same(rewrite_positive_quantifiers(parse_path_formula("A+ X a"), "edge"),
             "A (G(edge -> >0) -> X X a)"));
  CHECK(same(rewrite_positive_quantifiers(parse_formula("Ef(= 2 & A X p)"), "edge"), "Ef(= 2 & A X X p)"));
  FormulaPtr plain = parse_formula("p & !q");
  CHECK(equal(rewrite_positive_quantifiers(plain, "edge"), plain));
}

TEST_CASE("substitution") {
  FormulaPtr body = parse_formula("Ef(>= x + 2)");
  CHECK(same(substitute_variable(body, "x", 3), "Ef(>= 5)"));
  CHECK_THROWS_AS(substitute_variable(body, "y", 3), Error);
  CHECK(same(substitute_gmax(parse_formula("Ef(>= gmax - 4)"), 7), "Ef(>= 3)"));
  CHECK(same(substitute_gmax(parse_formula("Ef(>= gmax - 4)"), 2), "Ef(>= 0)"));
  CHECK(same(substitute_value_placeholder(parse_formula("Ef(>= ?)"), 3), "Ef(>= 3)"));
  CHECK(is_closed(substitute_value_placeholder(parse_formula("Ef(>= ?)"), 3)));
  CHECK(same(substitute_state_placeholder(parse_formula("Ef A X ?"), parse_formula("p | q")),
             "Ef A X (p | q)"));
  CHECK(same(fold_constants(parse_formula("Ef(>= 2 * 3 + 7 div 2)")), "Ef(>= 9)"));
}

TEST_CASE("free variables and binders") {
  FormulaPtr f = parse_formula("forall x. Ef(>= x + y)");
  CHECK(free_variables(f) == std::vector<std::string>{"y"});
  CHECK(binds_free(f));
  CHECK_FALSE(binds_free(parse_formula("forall x. Ef(>= 2)")));
}

TEST_CASE("bare variable in state position") {
  CHECK(same(parse_formula("exists x. Ef(x & A X > 0)"), "exists x. Ef(= x & A X > 0)"));
}
