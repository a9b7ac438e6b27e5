#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"
#include "flowlogic/oracle.hpp"

namespace flowlogic::testing {

using Rng = std::mt19937_64;

struct NetworkShape {
  std::size_t max_vertices = 5;  // including source and targets
  std::int64_t max_capacity = 3;
  std::vector<std::string> ap = {"p", "q"};
  double edge_probability = 0.5;
  double back_edge_probability = 0.15;
  bool allow_two_targets = true;
};

// A valid network: vertices in a random order with forward edges, a few
// back edges between inner vertices, and repairs until every vertex reaches
// a target.
FlowNetwork random_network(Rng& rng, const NetworkShape& shape = {});

// Source, `length` inner vertices in a chain and a target; every vertex
// also has a shortcut to the target.
FlowNetwork path_network(std::size_t length, std::int64_t capacity);

struct FormulaShape {
  // Operator nesting depth; atoms and flow propositions have depth 0.
  std::size_t max_depth = 4;
  std::vector<std::string> ap = {"p", "q"};
  std::int64_t max_constant = 4;
  bool real_quantifiers = false;
  bool max_quantifiers = true;
  bool positive_path_quantifiers = true;
  bool value_quantifiers = true;
  bool flow_quantifiers = true;
  bool subtraction_and_div = true;
};

// Closed state formula without past operators, depth <= max_depth.
FormulaPtr random_formula(Rng& rng, const FormulaShape& shape = {});

// Closed formula built from E(A psi_1 & ... & A psi_n) blocks over integral
// quantifiers; always normalizes to the conjunctive fragment.
FormulaPtr random_cbfl_formula(Rng& rng, const FormulaShape& shape = {});

// Flow-quantified body using only + and * in its value expressions,
// wrapped in one value quantifier over `x`.
FormulaPtr random_arith_value_formula(Rng& rng, const FormulaShape& shape = {});

// Path formula without flow or value quantifiers; flow propositions and
// A+ / E+ may occur.
FormulaPtr random_path_formula(Rng& rng, std::size_t depth, const FormulaShape& shape = {});

// State formula meant for the body of a flow quantifier: flow propositions
// may occur free, no value variables remain open.
FormulaPtr random_flow_body(Rng& rng, const FormulaShape& shape = {});

// random_formula with one flow proposition replaced by (op ?), op never =.
FormulaPtr random_value_query(Rng& rng, const FormulaShape& shape = {});

// random_formula with one atom replaced by the state placeholder ?.
FormulaPtr random_prop_query(Rng& rng, const FormulaShape& shape = {});

// Random 3-CNF with exactly three distinct variables per clause.
CnfFormula random_3cnf(Rng& rng, int num_variables, std::size_t num_clauses);

}  // namespace flowlogic::testing
