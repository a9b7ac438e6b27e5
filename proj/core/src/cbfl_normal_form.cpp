#include "flowlogic/cbfl_normal_form.hpp"

#include <algorithm>

#include "flowlogic/error.hpp"

namespace flowlogic {

namespace {

[[noreturn]] void not_conjunctive(const FormulaPtr& f, const std::string& why) {
  throw Error(ErrorCode::kNotConjunctive, why + ": " + to_string(f));
}

CbflPtr make(CbflFormula::Kind kind, std::vector<CbflPtr> children = {}) {
  auto node = std::make_shared<CbflFormula>();
  node->kind = kind;
  for (const auto& c : children) node->level = std::max(node->level, c->level);
  node->children = std::move(children);
  return node;
}

CbflPtr negate(CbflPtr f) {
  if (f->kind == CbflFormula::Kind::kTrue) return make(CbflFormula::Kind::kFalse);
  if (f->kind == CbflFormula::Kind::kFalse) return make(CbflFormula::Kind::kTrue);
  if (f->kind == CbflFormula::Kind::kNot) return f->children[0];
  return make(CbflFormula::Kind::kNot, {std::move(f)});
}

CbflPtr boolean_level(const FormulaPtr& f, bool negated);

struct Prefix {
  std::vector<bool> steps;
  bool globally = false;
};

// Pushes the requirements of `f` (under `negated` polarity) reached through
// the universal prefix `at`.
void collect(const FormulaPtr& f, bool negated, const Prefix& at, bool in_path,
             std::vector<CbflRequirement>& out);

void add_assertion(CbflPtr assertion, const Prefix& at, std::vector<CbflRequirement>& out) {
  if (assertion->kind == CbflFormula::Kind::kTrue) return;
  CbflRequirement r;
  r.strong_steps = at.steps;
  r.globally = at.globally;
  r.assertion = std::move(assertion);
  out.push_back(std::move(r));
}

void add_false(const Prefix& at, std::vector<CbflRequirement>& out) {
  Prefix p = at;
  p.globally = false;
  add_assertion(make(CbflFormula::Kind::kFalse), p, out);
}

void collect(const FormulaPtr& f, bool negated, const Prefix& at, bool in_path,
             std::vector<CbflRequirement>& out) {
  switch (f->kind()) {
    case FormulaKind::kTrue:
      if (negated) add_false(at, out);
      return;
    case FormulaKind::kFalse:
      if (!negated) add_false(at, out);
      return;
    case FormulaKind::kAtom:
      add_assertion(boolean_level(f, negated), at, out);
      return;
    case FormulaKind::kFlowProp: {
      auto value = evaluate(f->expr());
      if (!value) not_conjunctive(f, "flow proposition without a constant bound");
      FlowBound b{f->cmp(), *value};
      if (negated) {
        switch (f->cmp()) {
          case CmpOp::kGt: b.op = CmpOp::kLe; break;
          case CmpOp::kGe: b.op = CmpOp::kLt; break;
          case CmpOp::kLt: b.op = CmpOp::kGe; break;
          case CmpOp::kLe: b.op = CmpOp::kGt; break;
          case CmpOp::kEq:
            if (*value != 0) not_conjunctive(f, "negated equality is a disjunction");
            b.op = CmpOp::kGt;
            break;
        }
      }
      CbflRequirement r;
      r.strong_steps = at.steps;
      r.globally = at.globally;
      r.flow = b;
      out.push_back(std::move(r));
      return;
    }
    case FormulaKind::kNot:
      collect(f->child(), !negated, at, in_path, out);
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies: {
      bool conjunctive = f->kind() == FormulaKind::kAnd ? !negated
                         : f->kind() == FormulaKind::kOr ? negated
                                                         : negated;
      if (conjunctive) {
        for (std::size_t i = 0; i < f->children().size(); ++i) {
          bool flip = f->kind() == FormulaKind::kImplies && i == 0;
          collect(f->child(i), negated != flip, at, in_path, out);
        }
        return;
      }
      try {
        add_assertion(boolean_level(f, negated), at, out);
      } catch (const Error&) {
        not_conjunctive(f, "disjunction over flow-dependent requirements");
      }
      return;
    }
    case FormulaKind::kPathQuant: {
      PathQuantifier q = f->path_quantifier();
      if (is_positive(q)) not_conjunctive(f, "positive path quantifier");
      bool universal = (q == PathQuantifier::kA) != negated;
      if (!universal) not_conjunctive(f, "existential path quantifier");
      collect(f->child(), negated, at, true, out);
      return;
    }
    case FormulaKind::kFlowQuant:
      add_assertion(boolean_level(f, negated), at, out);
      return;
    case FormulaKind::kNext: {
      if (!in_path) not_conjunctive(f, "temporal operator outside a path quantifier");
      if (!negated && at.globally) {
        add_false(at, out);
        return;
      }
      Prefix next = at;
      // A weak step under G commutes to the front of G.
      next.steps.push_back(!negated);
      collect(f->child(), negated, next, in_path, out);
      return;
    }
    case FormulaKind::kGlobally:
    case FormulaKind::kFinally: {
      if (!in_path) not_conjunctive(f, "temporal operator outside a path quantifier");
      bool is_g = (f->kind() == FormulaKind::kGlobally) != negated;
      if (!is_g) not_conjunctive(f, "eventuality");
      Prefix next = at;
      next.globally = true;
      collect(f->child(), negated, next, in_path, out);
      return;
    }
    case FormulaKind::kUntil: not_conjunctive(f, "until");
    case FormulaKind::kYesterday:
    case FormulaKind::kSince: not_conjunctive(f, "past operator");
    case FormulaKind::kValueQuant: not_conjunctive(f, "value quantifier");
    case FormulaKind::kPlaceholder: not_conjunctive(f, "placeholder");
  }
}

CbflPtr boolean_level(const FormulaPtr& f, bool negated) {
  switch (f->kind()) {
    case FormulaKind::kTrue:
      return make(negated ? CbflFormula::Kind::kFalse : CbflFormula::Kind::kTrue);
    case FormulaKind::kFalse:
      return make(negated ? CbflFormula::Kind::kTrue : CbflFormula::Kind::kFalse);
    case FormulaKind::kAtom: {
      auto node = std::make_shared<CbflFormula>();
      node->kind = CbflFormula::Kind::kAtom;
      node->atom = f->name();
      return negated ? negate(node) : node;
    }
    case FormulaKind::kNot: return boolean_level(f->child(), !negated);
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      std::vector<CbflPtr> parts;
      for (const auto& c : f->children()) parts.push_back(boolean_level(c, false));
      auto node = make(f->kind() == FormulaKind::kAnd ? CbflFormula::Kind::kAnd
                                                      : CbflFormula::Kind::kOr,
                       std::move(parts));
      return negated ? negate(node) : node;
    }
    case FormulaKind::kImplies: {
      auto node = make(CbflFormula::Kind::kOr,
                       {negate(boolean_level(f->child(0), false)), boolean_level(f->child(1), false)});
      return negated ? negate(node) : node;
    }
    case FormulaKind::kFlowQuant: {
      FlowQuantifier q = f->flow_quantifier();
      bool universal = is_universal(q);
      auto block = std::make_shared<CbflExistential>();
      block->quantifier = existential(q);
      collect(f->child(), universal, Prefix{}, false, block->requirements);
      auto node = std::make_shared<CbflFormula>();
      node->kind = CbflFormula::Kind::kExists;
      int inner = 0;
      for (const auto& r : block->requirements) {
        if (r.assertion) inner = std::max(inner, r.assertion->level);
      }
      node->level = inner + 1;
      node->block = block;
      return universal != negated ? negate(node) : node;
    }
    case FormulaKind::kFlowProp: not_conjunctive(f, "flow proposition outside a flow quantifier");
    case FormulaKind::kPathQuant:
      not_conjunctive(f, "path quantifier outside a flow quantifier");
    default: not_conjunctive(f, "not a Boolean assertion");
  }
}

FormulaPtr requirement_formula(const CbflRequirement& r) {
  FormulaPtr leaf = r.flow ? Formula::flow_prop(r.flow->op, r.flow->value) : to_formula(r.assertion);
  if (r.globally) leaf = Formula::always(leaf);
  for (auto it = r.strong_steps.rbegin(); it != r.strong_steps.rend(); ++it) {
    leaf = *it ? Formula::next(leaf)
               : Formula::negation(Formula::next(Formula::negation(leaf)));
  }
  if (r.strong_steps.empty() && !r.globally) return leaf;
  return Formula::path(PathQuantifier::kA, leaf);
}

}  // namespace

CbflPtr normalize_cbfl(const FormulaPtr& f) { return boolean_level(f, false); }

FormulaPtr to_formula(const CbflPtr& f) {
  switch (f->kind) {
    case CbflFormula::Kind::kTrue: return Formula::make_true();
    case CbflFormula::Kind::kFalse: return Formula::make_false();
    case CbflFormula::Kind::kAtom: return Formula::atom(f->atom);
    case CbflFormula::Kind::kNot: return Formula::negation(to_formula(f->children[0]));
    case CbflFormula::Kind::kAnd:
    case CbflFormula::Kind::kOr: {
      std::vector<FormulaPtr> parts;
      for (const auto& c : f->children) parts.push_back(to_formula(c));
      return f->kind == CbflFormula::Kind::kAnd ? Formula::conjunction(std::move(parts))
                                                : Formula::disjunction(std::move(parts));
    }
    case CbflFormula::Kind::kExists: {
      std::vector<FormulaPtr> parts;
      for (const auto& r : f->block->requirements) parts.push_back(requirement_formula(r));
      return Formula::flow(f->block->quantifier, Formula::conjunction(std::move(parts)));
    }
  }
  return Formula::make_true();
}

}  // namespace flowlogic
