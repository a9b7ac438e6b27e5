#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "flowlogic/cbfl_normal_form.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/network.hpp"

namespace flowlogic {

// Truth sets of already-evaluated normal-form subformulas, keyed by node.
using CbflLabels = std::unordered_map<const CbflFormula*, VertexSet>;

struct ConstraintSheet {
  bool refuted = false;
  std::string reason;  // set when refuted
  // Accumulated flow bounds with strictness, indexed by vertex.
  std::vector<VertexRange> ranges;
  // Assertions each vertex was required to satisfy (all of them hold when
  // the sheet is not refuted).
  std::vector<std::vector<std::string>> required;
};

// Constraints that E(A psi_1 & ... & A psi_n) imposes when evaluated at v.
// Every assertion inside `block` must already have a set in `labels`.
ConstraintSheet extract_constraints(const FlowNetwork& net, VertexId v,
                                    const CbflExistential& block, const CbflLabels& labels);

// Vertices satisfying a normal-form formula; fills `labels` bottom-up.
VertexSet eval_cbfl(const FlowNetwork& net, const CbflPtr& f, CbflLabels& labels);

// Polynomial-time check for the conjunctive fragment. Throws
// Error(kNotNormalForm) when the formula does not normalize and
// Error(kNotClosed) for open formulas.
Verdict check_cbfl(const FlowNetwork& net, const FormulaPtr& phi);

}  // namespace flowlogic
