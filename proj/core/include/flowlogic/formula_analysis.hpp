#pragma once

#include <optional>
#include <string>

#include "flowlogic/formula.hpp"

namespace flowlogic {

struct FragmentTag {
  bool is_closed = false;
  bool is_flow_ctl_star = false;
  bool is_flow_ltl = false;
  bool is_lfl = false;
  bool is_bfl = false;
  bool is_bfl1 = false;
  bool is_exists_bfl1 = false;
  bool is_forall_bfl1 = false;
  bool is_lfl1 = false;
  bool is_exists_lfl1 = false;
  bool is_forall_lfl1 = false;
  std::optional<int> cbfl_level;
};

FragmentTag classify_formula(const FormulaPtr& f);

// Every flow proposition and every positive path quantifier lies under a
// flow quantifier, every variable under its value quantifier, and no
// placeholder remains.
bool is_closed(const FormulaPtr& f);

// Why is_closed(f) fails, or an empty string.
std::string closedness_problem(const FormulaPtr& f);

// Flow propositions and positive path quantifiers not under any flow
// quantifier of f, i.e. whether f's truth depends on an outer flow.
bool depends_on_flow(const FormulaPtr& f);

// Rewrites A+/E+ for evaluation on refine_for_positive_paths(net):
//   A+ psi -> A (G(edge -> > 0) -> psi'),  E+ psi -> E (G(edge -> > 0) & psi')
// where psi' doubles X and Y and guards U, S, F, G with `edge`.
FormulaPtr rewrite_positive_quantifiers(const FormulaPtr& f, const std::string& edge_prop);

// A Q psi -> Q A psi for universal flow quantifiers Q, and E Q psi -> Q E psi
// for existential ones. Other flow quantifiers with temporal operators
// outside a path quantifier in their body are left alone.
FormulaPtr commute_path_flow_quantifiers(const FormulaPtr& f);

// Whether a temporal operator occurs in f outside every path quantifier.
bool has_open_temporal(const FormulaPtr& f);

// Whether Y or S occurs in the path formula outside nested path quantifiers.
bool has_direct_past(const FormulaPtr& path_formula);

}  // namespace flowlogic
