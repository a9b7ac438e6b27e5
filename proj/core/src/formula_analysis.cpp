#include "flowlogic/formula_analysis.hpp"

#include <algorithm>
#include <vector>

#include "flowlogic/cbfl_normal_form.hpp"
#include "flowlogic/error.hpp"

namespace flowlogic {

namespace {

bool expr_problem(const ValueExprPtr& e, const std::vector<std::string>& bound,
                  std::string& out) {
  if (!e) return false;
  if (e->op == ValueOp::kVar &&
      std::find(bound.begin(), bound.end(), e->name) == bound.end()) {
    out = "variable '" + e->name + "' is not bound by a value quantifier";
    return true;
  }
  if (e->op == ValueOp::kPlaceholder) {
    out = "placeholder '?' remains";
    return true;
  }
  return expr_problem(e->lhs, bound, out) || expr_problem(e->rhs, bound, out);
}

bool find_problem(const FormulaPtr& f, bool under_flow, std::vector<std::string>& bound,
                  std::string& out) {
  switch (f->kind()) {
    case FormulaKind::kFlowProp:
      if (!under_flow) {
        out = "flow proposition '" + to_string(f) + "' is not under a flow quantifier";
        return true;
      }
      return expr_problem(f->expr(), bound, out);
    case FormulaKind::kPlaceholder:
      out = "placeholder '?' remains";
      return true;
    case FormulaKind::kPathQuant:
      if (is_positive(f->path_quantifier()) && !under_flow) {
        out = "positive path quantifier in '" + to_string(f) + "' is not under a flow quantifier";
        return true;
      }
      break;
    case FormulaKind::kFlowQuant:
      return find_problem(f->child(), true, bound, out);
    case FormulaKind::kValueQuant: {
      bound.push_back(f->name());
      bool bad = find_problem(f->child(), under_flow, bound, out);
      bound.pop_back();
      return bad;
    }
    default:
      break;
  }
  for (const auto& c : f->children()) {
    if (find_problem(c, under_flow, bound, out)) return true;
  }
  return false;
}

bool open_flow_dependency(const FormulaPtr& f) {
  switch (f->kind()) {
    case FormulaKind::kFlowProp: return true;
    case FormulaKind::kFlowQuant: return false;
    case FormulaKind::kPathQuant:
      if (is_positive(f->path_quantifier())) return true;
      break;
    default: break;
  }
  for (const auto& c : f->children()) {
    if (open_flow_dependency(c)) return true;
  }
  return false;
}

bool flow_free(const FormulaPtr& f) {
  return !contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kFlowQuant || g.kind() == FormulaKind::kValueQuant ||
           g.kind() == FormulaKind::kPlaceholder;
  });
}

bool is_flow_ltl_path(const FormulaPtr& psi) {
  return flow_free(psi) && !contains_kind(psi, FormulaKind::kPathQuant);
}

bool is_boolean_connective(FormulaKind k) {
  return k == FormulaKind::kNot || k == FormulaKind::kAnd || k == FormulaKind::kOr ||
         k == FormulaKind::kImplies || k == FormulaKind::kTrue || k == FormulaKind::kFalse;
}

// 0 = not a leaf, 1 = existential leaf, 2 = universal leaf.
int lfl1_leaf(const FormulaPtr& f) {
  if (f->kind() == FormulaKind::kFlowQuant) {
    const auto& body = f->child();
    if (body->kind() == FormulaKind::kPathQuant &&
        body->path_quantifier() == PathQuantifier::kA && is_flow_ltl_path(body->child())) {
      return is_universal(f->flow_quantifier()) ? 2 : 1;
    }
  }
  if (f->kind() == FormulaKind::kPathQuant && f->path_quantifier() == PathQuantifier::kA) {
    const auto& body = f->child();
    if (body->kind() == FormulaKind::kFlowQuant && is_universal(body->flow_quantifier()) &&
        is_flow_ltl_path(body->child())) {
      return 2;
    }
  }
  return 0;
}

int bfl1_leaf(const FormulaPtr& f) {
  if (f->kind() != FormulaKind::kFlowQuant || !flow_free(f->child())) return 0;
  return is_universal(f->flow_quantifier()) ? 2 : 1;
}

bool boolean_combination(const FormulaPtr& f, int (*leaf)(const FormulaPtr&), int& leaves) {
  if (leaf(f)) {
    ++leaves;
    return true;
  }
  if (!is_boolean_connective(f->kind())) return false;
  for (const auto& c : f->children()) {
    if (!boolean_combination(c, leaf, leaves)) return false;
  }
  return true;
}

bool bfl_shape(const FormulaPtr& f, bool parent_is_path_quant) {
  if (is_temporal(f->kind()) && !parent_is_path_quant) return false;
  bool here = f->kind() == FormulaKind::kPathQuant;
  for (const auto& c : f->children()) {
    if (is_temporal(f->kind()) && is_temporal(c->kind())) return false;
    if (!bfl_shape(c, here)) return false;
  }
  return true;
}

bool open_temporal(const FormulaPtr& f) {
  if (is_temporal(f->kind())) return true;
  if (f->kind() == FormulaKind::kPathQuant) return false;
  for (const auto& c : f->children()) {
    if (open_temporal(c)) return true;
  }
  return false;
}

bool direct_past(const FormulaPtr& f) {
  if (is_past(f->kind())) return true;
  if (f->kind() == FormulaKind::kPathQuant) return false;
  for (const auto& c : f->children()) {
    if (direct_past(c)) return true;
  }
  return false;
}

}  // namespace

std::string closedness_problem(const FormulaPtr& f) {
  std::vector<std::string> bound;
  std::string out;
  find_problem(f, false, bound, out);
  return out;
}

bool is_closed(const FormulaPtr& f) { return closedness_problem(f).empty(); }

bool depends_on_flow(const FormulaPtr& f) { return open_flow_dependency(f); }

bool has_open_temporal(const FormulaPtr& f) { return open_temporal(f); }

bool has_direct_past(const FormulaPtr& path_formula) { return direct_past(path_formula); }

FragmentTag classify_formula(const FormulaPtr& f) {
  FragmentTag tag;
  tag.is_closed = is_closed(f);
  tag.is_flow_ctl_star = flow_free(f);
  tag.is_flow_ltl = f->kind() == FormulaKind::kPathQuant &&
                    f->path_quantifier() == PathQuantifier::kA && is_flow_ltl_path(f->child());

  int leaves = 0;
  tag.is_lfl1 = boolean_combination(f, &lfl1_leaf, leaves) && leaves > 0;
  tag.is_exists_lfl1 = lfl1_leaf(f) == 1;
  tag.is_forall_lfl1 = lfl1_leaf(f) == 2;
  bool outer_a = f->kind() == FormulaKind::kPathQuant &&
                 f->path_quantifier() == PathQuantifier::kA &&
                 !contains_kind(f->child(), FormulaKind::kPathQuant);
  tag.is_lfl = outer_a || tag.is_lfl1;

  leaves = 0;
  tag.is_bfl1 = boolean_combination(f, &bfl1_leaf, leaves) && leaves > 0;
  tag.is_exists_bfl1 = bfl1_leaf(f) == 1;
  tag.is_forall_bfl1 = bfl1_leaf(f) == 2;
  tag.is_bfl = bfl_shape(f, false);

  if (tag.is_closed) {
    try {
      FormulaPtr folded = substitute_gmax(commute_path_flow_quantifiers(f), 1);
      tag.cbfl_level = normalize_cbfl(folded)->level;
    } catch (const Error&) {
      tag.cbfl_level.reset();
    }
  }
  return tag;
}

namespace {

FormulaPtr rewrite_positive(const FormulaPtr& f, const std::string& edge) {
  auto edge_atom = Formula::atom(edge);
  auto not_edge = Formula::negation(edge_atom);
  std::vector<FormulaPtr> children;
  for (const auto& c : f->children()) children.push_back(rewrite_positive(c, edge));

  switch (f->kind()) {
    case FormulaKind::kPathQuant: {
      FormulaPtr body = children[0];
      FormulaPtr positive = Formula::always(
          Formula::implication(edge_atom, Formula::flow_prop(CmpOp::kGt, 0)));
      switch (f->path_quantifier()) {
        case PathQuantifier::kAPlus:
          return Formula::path(PathQuantifier::kA, Formula::implication(positive, body));
        case PathQuantifier::kEPlus:
          return Formula::path(PathQuantifier::kE, Formula::conjunction({positive, body}));
        default:
          return Formula::path(f->path_quantifier(), body);
      }
    }
    case FormulaKind::kNext: return Formula::next(Formula::next(children[0]));
    case FormulaKind::kYesterday: return Formula::yesterday(Formula::yesterday(children[0]));
    case FormulaKind::kUntil:
      return Formula::until(Formula::disjunction({children[0], edge_atom}),
                            Formula::conjunction({children[1], not_edge}));
    case FormulaKind::kSince:
      return Formula::since(Formula::disjunction({children[0], edge_atom}),
                            Formula::conjunction({children[1], not_edge}));
    case FormulaKind::kFinally:
      return Formula::eventually(Formula::conjunction({children[0], not_edge}));
    case FormulaKind::kGlobally:
      return Formula::always(Formula::disjunction({children[0], edge_atom}));
    default:
      if (children.empty()) return f;
      return f->with_children(std::move(children));
  }
}

}  // namespace

FormulaPtr rewrite_positive_quantifiers(const FormulaPtr& f, const std::string& edge_prop) {
  return rewrite_positive(f, edge_prop);
}

FormulaPtr commute_path_flow_quantifiers(const FormulaPtr& f) {
  return transform(f, [](const FormulaPtr& g) -> FormulaPtr {
    if (g->kind() != FormulaKind::kPathQuant || g->child()->kind() != FormulaKind::kFlowQuant) {
      return nullptr;
    }
    PathQuantifier pq = g->path_quantifier();
    FlowQuantifier fq = g->child()->flow_quantifier();
    bool same_side = (pq == PathQuantifier::kA && is_universal(fq)) ||
                     (pq == PathQuantifier::kE && !is_universal(fq));
    if (!same_side) return nullptr;
    return Formula::flow(fq, Formula::path(pq, g->child()->child()));
  });
}

}  // namespace flowlogic
