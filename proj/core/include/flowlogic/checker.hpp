#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowlogic/flow.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"

namespace flowlogic {

// 1 + sum of all capacities.
std::int64_t compute_cn(const FlowNetwork& net);

struct VertexLabel {
  std::string name;     // fresh proposition, e.g. "#q3"
  std::string formula;  // the subformula it stands for
  // For the outermost flow quantifier only the source entry is computed.
  VertexSet vertices;
};

struct Verdict {
  bool satisfied = false;
  std::vector<VertexLabel> vertex_labels;
  // For a satisfied top-level existential flow quantifier: a flow under
  // which its body holds at the source. For a violated universal one: a
  // counterexample flow.
  std::optional<FlowFunction> witness;
  std::string diagnostics;
  std::vector<std::string> warnings;
};

struct CheckOptions {
  // Value quantifiers range over [0, C_N + value_range_extension].
  std::int64_t value_range_extension = 0;
};

// Throws Error(kNotClosed) for open formulas and Error(kUnsupportedNesting)
// for flow quantifiers over path formulas that cannot be commuted outward
// or future operators inside Y / S.
Verdict check(const FlowNetwork& net, const FormulaPtr& phi, const CheckOptions& options = {});

struct FlowQuantifierResult {
  VertexSet holds;
  // Existential quantifiers: a witness at each vertex in `holds`. Universal
  // ones: a counterexample at each vertex outside it.
  std::vector<std::optional<FlowFunction>> witnesses;
};

// Q xi at every vertex. xi must be free of flow and value quantifiers;
// `labels` resolves propositions standing for already-evaluated
// subformulas. `gamma_max` is required for AfMax / EfMax and defaults to
// the network's maximal flow.
FlowQuantifierResult eval_flow_quantifier(
    const FlowNetwork& net, FlowQuantifier q, const FormulaPtr& xi,
    const std::unordered_map<std::string, VertexSet>& labels = {},
    std::optional<std::int64_t> gamma_max = std::nullopt);

// Q x. body at every vertex, body[x <- g] for g in [0, C_N + extension].
// body must be closed once x is bound.
VertexSet eval_value_quantifier(const FlowNetwork& net, ValueQuantifier q, const std::string& x,
                                const FormulaPtr& body, const CheckOptions& options = {});

// Witness for an existential BFL*_1 formula, or nullopt when it is false.
// Throws Error(kNotExistentialBfl1) for other shapes.
std::optional<FlowFunction> synthesize(const FlowNetwork& net, const FormulaPtr& phi);

// check() on an instance produced by cnf_to_network.
Verdict check_reduction_cnf(const FlowNetwork& net, const FormulaPtr& phi);

}  // namespace flowlogic
