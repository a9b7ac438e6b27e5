#include "flowlogic/cbfl.hpp"

#include "flowlogic/error.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "flowlogic/lp.hpp"

namespace flowlogic {

namespace {

VertexRange bound_range(const FlowBound& b) {
  VertexRange r;
  switch (b.op) {
    case CmpOp::kGt:
      r.lo = b.value;
      r.lo_strict = true;
      break;
    case CmpOp::kGe: r.lo = b.value; break;
    case CmpOp::kLt:
      r.hi = b.value;
      r.hi_strict = true;
      break;
    case CmpOp::kLe: r.hi = b.value; break;
    case CmpOp::kEq:
      r.lo = b.value;
      r.hi = b.value;
      break;
  }
  if (r.lo < 0) {
    r.lo = 0;
    r.lo_strict = false;
  }
  if (r.hi && *r.hi < 0) r.empty = true;
  if (r.hi && *r.hi == 0 && r.hi_strict) r.empty = true;
  return r;
}

std::string bound_text(const FlowBound& b) {
  return std::string(to_string(b.op)) + " " + std::to_string(b.value);
}

struct Evaluation {
  CbflLabels& labels;
  std::unordered_map<const CbflFormula*, std::vector<std::optional<FlowFunction>>> witnesses;
  std::optional<std::int64_t> gamma_max;
};

VertexSet eval_node(const FlowNetwork& net, const CbflPtr& f, Evaluation& ev);

void label_assertions(const FlowNetwork& net, const CbflExistential& block, Evaluation& ev) {
  for (const auto& r : block.requirements) {
    if (r.assertion) eval_node(net, r.assertion, ev);
  }
}

VertexSet eval_exists(const FlowNetwork& net, const CbflFormula& f, Evaluation& ev) {
  const CbflExistential& block = *f.block;
  label_assertions(net, block, ev);
  const std::size_t n = net.num_vertices();
  VertexSet out(n, false);
  auto& witnesses = ev.witnesses[&f];
  witnesses.assign(n, std::nullopt);
  bool real = is_real(block.quantifier);
  if (is_max(block.quantifier) && !ev.gamma_max) ev.gamma_max = max_flow(net).value;
  for (VertexId v = 0; v < n; ++v) {
    ConstraintSheet sheet = extract_constraints(net, v, block, ev.labels);
    if (sheet.refuted) continue;
    std::vector<VertexRange> ranges = sheet.ranges;
    if (is_max(block.quantifier)) {
      ranges[net.source()] = ranges[net.source()].intersect(VertexRange::point(*ev.gamma_max));
    }
    bool empty = false;
    for (auto& r : ranges) {
      if (!real) r = r.integerized();
      if (r.empty) empty = true;
    }
    if (empty) continue;
    ConstrainedFlowResult result =
        real ? real_vertex_constrained_flow(net, ranges) : vertex_constrained_flow(net, ranges);
    if (result.feasible()) {
      out[v] = true;
      witnesses[v] = result.flow;
    }
  }
  return out;
}

VertexSet eval_node(const FlowNetwork& net, const CbflPtr& f, Evaluation& ev) {
  auto it = ev.labels.find(f.get());
  if (it != ev.labels.end()) return it->second;
  const std::size_t n = net.num_vertices();
  VertexSet out(n, false);
  switch (f->kind) {
    case CbflFormula::Kind::kTrue: out.assign(n, true); break;
    case CbflFormula::Kind::kFalse: break;
    case CbflFormula::Kind::kAtom:
      for (VertexId v = 0; v < n; ++v) out[v] = net.has_label(v, f->atom);
      break;
    case CbflFormula::Kind::kNot:
      out = eval_node(net, f->children[0], ev);
      out.flip();
      break;
    case CbflFormula::Kind::kAnd:
    case CbflFormula::Kind::kOr: {
      bool is_and = f->kind == CbflFormula::Kind::kAnd;
      out.assign(n, is_and);
      for (const auto& c : f->children) {
        VertexSet s = eval_node(net, c, ev);
        for (VertexId v = 0; v < n; ++v) out[v] = is_and ? (out[v] && s[v]) : (out[v] || s[v]);
      }
      break;
    }
    case CbflFormula::Kind::kExists: out = eval_exists(net, *f, ev); break;
  }
  ev.labels[f.get()] = out;
  return out;
}

}  // namespace

ConstraintSheet extract_constraints(const FlowNetwork& net, VertexId v,
                                    const CbflExistential& block, const CbflLabels& labels) {
  const std::size_t n = net.num_vertices();
  ConstraintSheet sheet;
  sheet.ranges.assign(n, VertexRange::unbounded());
  sheet.required.assign(n, {});
  auto refute = [&](std::string reason) {
    sheet.refuted = true;
    sheet.reason = std::move(reason);
    return sheet;
  };

  for (const auto& req : block.requirements) {
    // Walk the step prefix; a target reached before a strong step ends a
    // path too early.
    VertexSet layer(n, false);
    layer[v] = true;
    for (std::size_t j = 0; j < req.strong_steps.size(); ++j) {
      VertexSet next(n, false);
      for (VertexId u = 0; u < n; ++u) {
        if (!layer[u]) continue;
        if (net.is_target(u)) {
          if (req.strong_steps[j]) {
            return refute("target path of length " + std::to_string(j) + " from " +
                          net.vertex_name(v) + " is shorter than required");
          }
          continue;
        }
        for (EdgeId e : net.out_edges(u)) {
          next[net.edge(e).to] = true;
        }
      }
      layer = std::move(next);
    }
    VertexSet scope = req.globally ? forward_closure(net, layer) : layer;

    if (req.flow) {
      VertexRange r = bound_range(*req.flow);
      for (VertexId u = 0; u < n; ++u) {
        if (!scope[u]) continue;
        sheet.ranges[u] = sheet.ranges[u].intersect(r);
        if (sheet.ranges[u].empty) {
          return refute("empty range at " + net.vertex_name(u));
        }
        sheet.required[u].push_back(bound_text(*req.flow));
      }
    } else {
      auto it = labels.find(req.assertion.get());
      if (it == labels.end()) {
        throw Error(ErrorCode::kPrecondition, "assertion not labeled: " +
                                                  to_string(to_formula(req.assertion)));
      }
      std::string text = to_string(to_formula(req.assertion));
      for (VertexId u = 0; u < n; ++u) {
        if (!scope[u]) continue;
        if (!it->second[u]) return refute(text + " fails at " + net.vertex_name(u));
        sheet.required[u].push_back(text);
      }
    }
  }
  if (!is_real(block.quantifier)) {
    for (VertexId u = 0; u < n; ++u) {
      if (sheet.ranges[u].integerized().empty) {
        return refute("no integer in " + sheet.ranges[u].to_string() + " at " +
                      net.vertex_name(u));
      }
    }
  }
  return sheet;
}

VertexSet eval_cbfl(const FlowNetwork& net, const CbflPtr& f, CbflLabels& labels) {
  Evaluation ev{labels, {}, std::nullopt};
  return eval_node(net, f, ev);
}

Verdict check_cbfl(const FlowNetwork& net, const FormulaPtr& phi) {
  std::string problem = closedness_problem(phi);
  if (!problem.empty()) throw Error(ErrorCode::kNotClosed, problem);
  FormulaPtr f = phi;
  std::optional<std::int64_t> gamma_max;
  if (uses_gmax(f)) {
    gamma_max = max_flow(net).value;
    f = substitute_gmax(f, *gamma_max);
  }
  CbflPtr normal;
  try {
    normal = normalize_cbfl(commute_path_flow_quantifiers(f));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotConjunctive) throw;
    throw Error(ErrorCode::kNotNormalForm, e.what());
  }

  CbflLabels labels;
  Evaluation ev{labels, {}, gamma_max};
  VertexSet sat = eval_node(net, normal, ev);

  Verdict verdict;
  verdict.satisfied = sat[net.source()];
  const CbflFormula* top = normal.get();
  bool negated = false;
  if (top->kind == CbflFormula::Kind::kNot) {
    top = top->children[0].get();
    negated = true;
  }
  if (top->kind == CbflFormula::Kind::kExists && negated != verdict.satisfied) {
    verdict.witness = ev.witnesses[top][net.source()];
  }
  std::vector<const CbflFormula*> stack{normal.get()};
  std::vector<const CbflFormula*> blocks;
  while (!stack.empty()) {
    const CbflFormula* node = stack.back();
    stack.pop_back();
    if (node->kind == CbflFormula::Kind::kExists) {
      blocks.push_back(node);
      for (const auto& r : node->block->requirements) {
        if (r.assertion) stack.push_back(r.assertion.get());
      }
    }
    for (const auto& c : node->children) stack.push_back(c.get());
  }
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    auto found = labels.find(*it);
    if (found == labels.end()) continue;
    CbflPtr alias(std::shared_ptr<const CbflFormula>{}, *it);
    verdict.vertex_labels.push_back({"#q" + std::to_string(verdict.vertex_labels.size() + 1),
                                     to_string(to_formula(alias)), found->second});
  }
  verdict.diagnostics = std::string(verdict.satisfied ? "satisfied" : "not satisfied") +
                        " at source " + net.vertex_name(net.source()) + " (conjunctive fragment)";
  return verdict;
}

}  // namespace flowlogic
