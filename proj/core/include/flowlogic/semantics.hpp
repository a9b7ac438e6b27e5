#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "flowlogic/flow.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"

namespace flowlogic {

// Decides the atoms of a flow-quantifier-free formula at each vertex.
struct Valuation {
  // Truth of (op gamma) at v. Required when flow propositions occur.
  std::function<bool(VertexId, CmpOp, std::int64_t)> flow_prop;
  // Whether edge e carries positive flow. Required for A+ / E+.
  std::function<bool(EdgeId)> positive_edge;
  // Labels for resolved subformulas; consulted before network labels.
  std::unordered_map<std::string, VertexSet> extra_labels;
};

// Flow propositions and edge positivity read from a fixed flow.
Valuation flow_valuation(const FlowNetwork& net, const FlowFunction& flow);

// Vertices satisfying phi. Throws Error(kPrecondition) when phi contains a
// flow or value quantifier, a placeholder, or an unfolded expression, and
// Error(kUnsupportedNesting) for a future operator inside Y or S.
VertexSet eval_state_set(const FlowNetwork& net, const Valuation& valuation,
                         const FormulaPtr& phi);
VertexSet eval_state_set(const FlowNetwork& net, const FlowFunction& flow,
                         const FormulaPtr& phi);

// Q psi at every vertex over target v-paths (positive ones for A+ / E+).
// psi must not contain direct past operators.
VertexSet eval_path_quantifier(const FlowNetwork& net, const Valuation& valuation,
                               PathQuantifier q, const FormulaPtr& psi);

// Q psi at every vertex v over source-target paths through v, evaluated at
// v's position. Positivity for A+ / E+ is required from v onward.
VertexSet eval_with_past(const FlowNetwork& net, const Valuation& valuation,
                         PathQuantifier q, const FormulaPtr& psi);

// Flow propositions that may be undecided (nullopt).
struct PartialValuation {
  std::function<std::optional<bool>(VertexId, CmpOp, std::int64_t)> flow_prop;
  std::unordered_map<std::string, VertexSet> extra_labels;
};

// must: vertices where phi holds however the undecided propositions are
// resolved; may: vertices where it holds for some resolution.
struct StateBounds {
  VertexSet must;
  VertexSet may;
};

// Kleene-style bounds. Path quantifiers with direct past operators over
// undecided atoms get the trivial bounds (nothing must hold, all may).
StateBounds eval_state_bounds(const FlowNetwork& net, const PartialValuation& valuation,
                              const FormulaPtr& phi);

}  // namespace flowlogic
