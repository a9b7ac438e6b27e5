#include "flowlogic/formula.hpp"

#include <algorithm>
#include <set>

#include "flowlogic/error.hpp"

namespace flowlogic {

ValueExprPtr ValueExpr::constant(std::int64_t value) {
  auto e = std::make_shared<ValueExpr>();
  e->op = ValueOp::kConst;
  e->value = value;
  return e;
}

ValueExprPtr ValueExpr::variable(std::string name) {
  auto e = std::make_shared<ValueExpr>();
  e->op = ValueOp::kVar;
  e->name = std::move(name);
  return e;
}

ValueExprPtr ValueExpr::gmax() {
  auto e = std::make_shared<ValueExpr>();
  e->op = ValueOp::kGmax;
  return e;
}

ValueExprPtr ValueExpr::placeholder() {
  auto e = std::make_shared<ValueExpr>();
  e->op = ValueOp::kPlaceholder;
  return e;
}

ValueExprPtr ValueExpr::binary(ValueOp op, ValueExprPtr lhs, ValueExprPtr rhs) {
  auto e = std::make_shared<ValueExpr>();
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kEq: return "=";
  }
  return "?";
}

bool compare(std::int64_t lhs, CmpOp op, std::int64_t rhs) {
  switch (op) {
    case CmpOp::kGt: return lhs > rhs;
    case CmpOp::kGe: return lhs >= rhs;
    case CmpOp::kLt: return lhs < rhs;
    case CmpOp::kLe: return lhs <= rhs;
    case CmpOp::kEq: return lhs == rhs;
  }
  return false;
}

std::string_view to_string(PathQuantifier q) {
  switch (q) {
    case PathQuantifier::kA: return "A";
    case PathQuantifier::kE: return "E";
    case PathQuantifier::kAPlus: return "A+";
    case PathQuantifier::kEPlus: return "E+";
  }
  return "?";
}

std::string_view to_string(FlowQuantifier q) {
  switch (q) {
    case FlowQuantifier::kAf: return "Af";
    case FlowQuantifier::kEf: return "Ef";
    case FlowQuantifier::kAfMax: return "AfMax";
    case FlowQuantifier::kEfMax: return "EfMax";
    case FlowQuantifier::kAfR: return "AfR";
    case FlowQuantifier::kEfR: return "EfR";
  }
  return "?";
}

bool is_universal(PathQuantifier q) {
  return q == PathQuantifier::kA || q == PathQuantifier::kAPlus;
}
bool is_positive(PathQuantifier q) {
  return q == PathQuantifier::kAPlus || q == PathQuantifier::kEPlus;
}
bool is_universal(FlowQuantifier q) {
  return q == FlowQuantifier::kAf || q == FlowQuantifier::kAfMax || q == FlowQuantifier::kAfR;
}
bool is_max(FlowQuantifier q) {
  return q == FlowQuantifier::kAfMax || q == FlowQuantifier::kEfMax;
}
bool is_real(FlowQuantifier q) {
  return q == FlowQuantifier::kAfR || q == FlowQuantifier::kEfR;
}

FlowQuantifier existential(FlowQuantifier q) {
  if (is_max(q)) return FlowQuantifier::kEfMax;
  if (is_real(q)) return FlowQuantifier::kEfR;
  return FlowQuantifier::kEf;
}

FlowQuantifier dual(FlowQuantifier q) {
  switch (q) {
    case FlowQuantifier::kAf: return FlowQuantifier::kEf;
    case FlowQuantifier::kEf: return FlowQuantifier::kAf;
    case FlowQuantifier::kAfMax: return FlowQuantifier::kEfMax;
    case FlowQuantifier::kEfMax: return FlowQuantifier::kAfMax;
    case FlowQuantifier::kAfR: return FlowQuantifier::kEfR;
    case FlowQuantifier::kEfR: return FlowQuantifier::kAfR;
  }
  return q;
}

PathQuantifier dual(PathQuantifier q) {
  switch (q) {
    case PathQuantifier::kA: return PathQuantifier::kE;
    case PathQuantifier::kE: return PathQuantifier::kA;
    case PathQuantifier::kAPlus: return PathQuantifier::kEPlus;
    case PathQuantifier::kEPlus: return PathQuantifier::kAPlus;
  }
  return q;
}


std::shared_ptr<Formula> Formula::create(FormulaKind kind) {
  std::shared_ptr<Formula> f(new Formula());
  f->kind_ = kind;
  return f;
}

FormulaPtr Formula::make_true() {
  static const FormulaPtr instance = create(FormulaKind::kTrue);
  return instance;
}

FormulaPtr Formula::make_false() {
  static const FormulaPtr instance = create(FormulaKind::kFalse);
  return instance;
}

FormulaPtr Formula::atom(std::string name) {
  auto f = create(FormulaKind::kAtom);
  f->name_ = std::move(name);
  return f;
}

FormulaPtr Formula::flow_prop(CmpOp op, ValueExprPtr expr) {
  auto f = create(FormulaKind::kFlowProp);
  f->cmp_ = op;
  f->expr_ = std::move(expr);
  return f;
}

FormulaPtr Formula::flow_prop(CmpOp op, std::int64_t value) {
  return flow_prop(op, ValueExpr::constant(value));
}

FormulaPtr Formula::placeholder() { return create(FormulaKind::kPlaceholder); }

FormulaPtr Formula::negation(FormulaPtr operand) {
  auto f = create(FormulaKind::kNot);
  f->children_ = {std::move(operand)};
  return f;
}

namespace {

FormulaPtr nary(FormulaKind kind, std::vector<FormulaPtr> operands,
                FormulaPtr (*empty)(), std::shared_ptr<Formula> node,
                std::vector<FormulaPtr>& children) {
  std::vector<FormulaPtr> flat;
  for (auto& op : operands) {
    if (op->kind() == kind) {
      flat.insert(flat.end(), op->children().begin(), op->children().end());
    } else {
      flat.push_back(std::move(op));
    }
  }
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat.front();
  children = std::move(flat);
  return node;
}

}  // namespace

FormulaPtr Formula::conjunction(std::vector<FormulaPtr> operands) {
  auto f = create(FormulaKind::kAnd);
  return nary(FormulaKind::kAnd, std::move(operands), &Formula::make_true, f,
              f->children_);
}

FormulaPtr Formula::disjunction(std::vector<FormulaPtr> operands) {
  auto f = create(FormulaKind::kOr);
  return nary(FormulaKind::kOr, std::move(operands), &Formula::make_false, f,
              f->children_);
}

FormulaPtr Formula::implication(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = create(FormulaKind::kImplies);
  f->children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::path(PathQuantifier q, FormulaPtr body) {
  auto f = create(FormulaKind::kPathQuant);
  f->path_q_ = q;
  f->children_ = {std::move(body)};
  return f;
}

FormulaPtr Formula::flow(FlowQuantifier q, FormulaPtr body) {
  auto f = create(FormulaKind::kFlowQuant);
  f->flow_q_ = q;
  f->children_ = {std::move(body)};
  return f;
}

FormulaPtr Formula::value(ValueQuantifier q, std::string var, FormulaPtr body) {
  auto f = create(FormulaKind::kValueQuant);
  f->value_q_ = q;
  f->name_ = std::move(var);
  f->children_ = {std::move(body)};
  return f;
}

FormulaPtr Formula::next(FormulaPtr operand) {
  auto f = create(FormulaKind::kNext);
  f->children_ = {std::move(operand)};
  return f;
}

FormulaPtr Formula::until(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = create(FormulaKind::kUntil);
  f->children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::eventually(FormulaPtr operand) {
  auto f = create(FormulaKind::kFinally);
  f->children_ = {std::move(operand)};
  return f;
}

FormulaPtr Formula::always(FormulaPtr operand) {
  auto f = create(FormulaKind::kGlobally);
  f->children_ = {std::move(operand)};
  return f;
}

FormulaPtr Formula::yesterday(FormulaPtr operand) {
  auto f = create(FormulaKind::kYesterday);
  f->children_ = {std::move(operand)};
  return f;
}

FormulaPtr Formula::since(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = create(FormulaKind::kSince);
  f->children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::with_children(std::vector<FormulaPtr> children) const {
  if (kind_ == FormulaKind::kAnd) return conjunction(std::move(children));
  if (kind_ == FormulaKind::kOr) return disjunction(std::move(children));
  std::shared_ptr<Formula> f(new Formula(*this));
  f->children_ = std::move(children);
  return f;
}

bool equal(const ValueExprPtr& a, const ValueExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case ValueOp::kConst: return a->value == b->value;
    case ValueOp::kVar: return a->name == b->name;
    case ValueOp::kGmax:
    case ValueOp::kPlaceholder: return true;
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind() != b->kind()) return false;
  if (a->children().size() != b->children().size()) return false;
  switch (a->kind()) {
    case FormulaKind::kAtom:
      if (a->name() != b->name()) return false;
      break;
    case FormulaKind::kFlowProp:
      if (a->cmp() != b->cmp() || !equal(a->expr(), b->expr())) return false;
      break;
    case FormulaKind::kPathQuant:
      if (a->path_quantifier() != b->path_quantifier()) return false;
      break;
    case FormulaKind::kFlowQuant:
      if (a->flow_quantifier() != b->flow_quantifier()) return false;
      break;
    case FormulaKind::kValueQuant:
      if (a->value_quantifier() != b->value_quantifier() || a->name() != b->name()) {
        return false;
      }
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    if (!equal(a->child(i), b->child(i))) return false;
  }
  return true;
}

namespace {

void mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_expr(const ValueExprPtr& e) {
  if (!e) return 0;
  std::size_t h = static_cast<std::size_t>(e->op);
  mix(h, std::hash<std::int64_t>{}(e->value));
  mix(h, std::hash<std::string>{}(e->name));
  mix(h, hash_expr(e->lhs));
  mix(h, hash_expr(e->rhs));
  return h;
}

}  // namespace

std::size_t hash(const FormulaPtr& f) {
  std::size_t h = static_cast<std::size_t>(f->kind());
  switch (f->kind()) {
    case FormulaKind::kAtom: mix(h, std::hash<std::string>{}(f->name())); break;
    case FormulaKind::kFlowProp:
      mix(h, static_cast<std::size_t>(f->cmp()));
      mix(h, hash_expr(f->expr()));
      break;
    case FormulaKind::kPathQuant: mix(h, static_cast<std::size_t>(f->path_quantifier())); break;
    case FormulaKind::kFlowQuant: mix(h, static_cast<std::size_t>(f->flow_quantifier())); break;
    case FormulaKind::kValueQuant:
      mix(h, static_cast<std::size_t>(f->value_quantifier()));
      mix(h, std::hash<std::string>{}(f->name()));
      break;
    default: break;
  }
  for (const auto& c : f->children()) mix(h, hash(c));
  return h;
}

// Printing. Precedence levels: -> 1, | 2, & 3, U/S 4, unary 5, atomic 6.

namespace {

int expr_level(const ValueExprPtr& e) {
  switch (e->op) {
    case ValueOp::kAdd:
    case ValueOp::kSub: return 1;
    case ValueOp::kMul:
    case ValueOp::kDiv: return 2;
    default: return 3;
  }
}

std::string print_expr(const ValueExprPtr& e, int min_level) {
  std::string out;
  switch (e->op) {
    case ValueOp::kConst: out = std::to_string(e->value); break;
    case ValueOp::kVar: out = e->name; break;
    case ValueOp::kGmax: out = "gmax"; break;
    case ValueOp::kPlaceholder: out = "?"; break;
    default: {
      int level = expr_level(e);
      std::string_view sym = e->op == ValueOp::kAdd   ? " + "
                             : e->op == ValueOp::kSub ? " - "
                             : e->op == ValueOp::kMul ? " * "
                                                      : " div ";
      out = print_expr(e->lhs, level);
      out += sym;
      out += print_expr(e->rhs, level + 1);
    }
  }
  if (expr_level(e) < min_level) return "(" + out + ")";
  return out;
}

int level(const FormulaPtr& f) {
  switch (f->kind()) {
    case FormulaKind::kImplies: return 1;
    case FormulaKind::kOr: return 2;
    case FormulaKind::kAnd: return 3;
    case FormulaKind::kUntil:
    case FormulaKind::kSince: return 4;
    case FormulaKind::kTrue:
    case FormulaKind::kFalse:
    case FormulaKind::kAtom:
    case FormulaKind::kPlaceholder: return 6;
    default: return 5;
  }
}

std::string print(const FormulaPtr& f, int min_level);

std::string unary(std::string_view op, const FormulaPtr& operand) {
  std::string body = print(operand, 5);
  if (!body.empty() && body.front() == '(') return std::string(op) + body;
  return std::string(op) + " " + body;
}

std::string print(const FormulaPtr& f, int min_level) {
  std::string out;
  switch (f->kind()) {
    case FormulaKind::kTrue: out = "true"; break;
    case FormulaKind::kFalse: out = "false"; break;
    case FormulaKind::kAtom: out = f->name(); break;
    case FormulaKind::kPlaceholder: out = "?"; break;
    case FormulaKind::kFlowProp:
      out = std::string(to_string(f->cmp())) + " " + print_expr(f->expr(), 1);
      break;
    case FormulaKind::kNot:
      out = f->child()->kind() == FormulaKind::kFlowProp
                ? "!(" + print(f->child(), 0) + ")"
                : "!" + print(f->child(), 5);
      break;
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      std::string_view sep = f->kind() == FormulaKind::kAnd ? " & " : " | ";
      int child_level = f->kind() == FormulaKind::kAnd ? 4 : 3;
      for (std::size_t i = 0; i < f->children().size(); ++i) {
        if (i > 0) out += sep;
        out += print(f->child(i), child_level);
      }
      break;
    }
    case FormulaKind::kImplies:
      out = print(f->child(0), 2) + " -> " + print(f->child(1), 1);
      break;
    case FormulaKind::kUntil:
    case FormulaKind::kSince:
      out = print(f->child(0), 5) + (f->kind() == FormulaKind::kUntil ? " U " : " S ") +
            print(f->child(1), 4);
      break;
    case FormulaKind::kPathQuant: out = unary(to_string(f->path_quantifier()), f->child()); break;
    case FormulaKind::kFlowQuant:
      out = f->child()->kind() == FormulaKind::kFlowProp
                ? std::string(to_string(f->flow_quantifier())) + "(" + print(f->child(), 0) + ")"
                : unary(to_string(f->flow_quantifier()), f->child());
      break;
    case FormulaKind::kValueQuant:
      out = (f->value_quantifier() == ValueQuantifier::kForall ? "forall " : "exists ") +
            f->name() + ". " + print(f->child(), 5);
      break;
    case FormulaKind::kNext: out = unary("X", f->child()); break;
    case FormulaKind::kFinally: out = unary("F", f->child()); break;
    case FormulaKind::kGlobally: out = unary("G", f->child()); break;
    case FormulaKind::kYesterday: out = unary("Y", f->child()); break;
  }
  if (level(f) < min_level) return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_string(const ValueExprPtr& e) { return print_expr(e, 0); }
std::string to_string(const FormulaPtr& f) { return print(f, 0); }

bool is_temporal(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kNext:
    case FormulaKind::kUntil:
    case FormulaKind::kFinally:
    case FormulaKind::kGlobally:
    case FormulaKind::kYesterday:
    case FormulaKind::kSince: return true;
    default: return false;
  }
}

bool is_past(FormulaKind kind) {
  return kind == FormulaKind::kYesterday || kind == FormulaKind::kSince;
}

bool contains(const FormulaPtr& f, const std::function<bool(const Formula&)>& pred) {
  if (pred(*f)) return true;
  for (const auto& c : f->children()) {
    if (contains(c, pred)) return true;
  }
  return false;
}

bool contains_kind(const FormulaPtr& f, FormulaKind kind) {
  return contains(f, [kind](const Formula& g) { return g.kind() == kind; });
}

namespace {

bool expr_has(const ValueExprPtr& e, ValueOp op) {
  if (!e) return false;
  return e->op == op || expr_has(e->lhs, op) || expr_has(e->rhs, op);
}

}  // namespace

bool uses_gmax(const FormulaPtr& f) {
  return contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kFlowProp && expr_has(g.expr(), ValueOp::kGmax);
  });
}

std::size_t depth(const FormulaPtr& f) {
  std::size_t d = 0;
  for (const auto& c : f->children()) d = std::max(d, depth(c));
  return d + 1;
}

std::size_t size(const FormulaPtr& f) {
  std::size_t n = 1;
  for (const auto& c : f->children()) n += size(c);
  return n;
}

FormulaPtr transform(const FormulaPtr& f,
                     const std::function<FormulaPtr(const FormulaPtr&)>& fn) {
  FormulaPtr node = f;
  if (!f->children().empty()) {
    std::vector<FormulaPtr> children;
    bool changed = false;
    for (const auto& c : f->children()) {
      children.push_back(transform(c, fn));
      changed = changed || children.back() != c;
    }
    if (changed) node = f->with_children(std::move(children));
  }
  FormulaPtr replaced = fn(node);
  return replaced ? replaced : node;
}

std::optional<std::int64_t> evaluate(const ValueExprPtr& e) {
  switch (e->op) {
    case ValueOp::kConst: return e->value;
    case ValueOp::kVar:
    case ValueOp::kGmax:
    case ValueOp::kPlaceholder: return std::nullopt;
    default: break;
  }
  auto a = evaluate(e->lhs);
  auto b = evaluate(e->rhs);
  if (!a || !b) return std::nullopt;
  switch (e->op) {
    case ValueOp::kAdd: return *a + *b;
    case ValueOp::kMul: return *a * *b;
    case ValueOp::kSub: return std::max<std::int64_t>(*a - *b, 0);
    case ValueOp::kDiv:
      if (*b <= 0) throw Error(ErrorCode::kMalformed, "div by a non-positive value");
      return *a / *b;
    default: return std::nullopt;
  }
}

namespace {

ValueExprPtr fold_expr(const ValueExprPtr& e) {
  if (auto v = evaluate(e)) {
    return e->op == ValueOp::kConst ? e : ValueExpr::constant(*v);
  }
  if (!e->lhs) return e;
  auto lhs = fold_expr(e->lhs);
  auto rhs = fold_expr(e->rhs);
  if (lhs == e->lhs && rhs == e->rhs) return e;
  return ValueExpr::binary(e->op, lhs, rhs);
}

ValueExprPtr replace_expr(const ValueExprPtr& e,
                          const std::function<ValueExprPtr(const ValueExpr&)>& leaf) {
  if (!e->lhs) {
    auto r = leaf(*e);
    return r ? r : e;
  }
  auto lhs = replace_expr(e->lhs, leaf);
  auto rhs = replace_expr(e->rhs, leaf);
  if (lhs == e->lhs && rhs == e->rhs) return e;
  return ValueExpr::binary(e->op, lhs, rhs);
}

// Rewrites leaves of every flow proposition outside the scope of a value
// quantifier binding `shadow` (when given).
FormulaPtr rewrite_props(const FormulaPtr& f,
                         const std::function<ValueExprPtr(const ValueExpr&)>& leaf,
                         const std::string* shadow) {
  if (f->kind() == FormulaKind::kValueQuant && shadow && f->name() == *shadow) return f;
  if (f->kind() == FormulaKind::kFlowProp) {
    auto e = fold_expr(replace_expr(f->expr(), leaf));
    if (e == f->expr()) return f;
    return Formula::flow_prop(f->cmp(), e);
  }
  if (f->children().empty()) return f;
  std::vector<FormulaPtr> children;
  bool changed = false;
  for (const auto& c : f->children()) {
    children.push_back(rewrite_props(c, leaf, shadow));
    changed = changed || children.back() != c;
  }
  return changed ? f->with_children(std::move(children)) : f;
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::vector<std::string>& out) {
  if (f->kind() == FormulaKind::kValueQuant) {
    bool inserted = bound.insert(f->name()).second;
    collect_free(f->child(), bound, out);
    if (inserted) bound.erase(f->name());
    return;
  }
  if (f->kind() == FormulaKind::kFlowProp) {
    std::function<void(const ValueExprPtr&)> walk = [&](const ValueExprPtr& e) {
      if (!e) return;
      if (e->op == ValueOp::kVar && !bound.count(e->name) &&
          std::find(out.begin(), out.end(), e->name) == out.end()) {
        out.push_back(e->name);
      }
      walk(e->lhs);
      walk(e->rhs);
    };
    walk(f->expr());
    return;
  }
  for (const auto& c : f->children()) collect_free(c, bound, out);
}

}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool binds_free(const FormulaPtr& value_quantifier) {
  auto free = free_variables(value_quantifier->child());
  return std::find(free.begin(), free.end(), value_quantifier->name()) != free.end();
}

FormulaPtr substitute_variable_unchecked(const FormulaPtr& f, const std::string& var,
                                         std::int64_t value) {
  return rewrite_props(
      f,
      [&](const ValueExpr& e) -> ValueExprPtr {
        if (e.op == ValueOp::kVar && e.name == var) return ValueExpr::constant(value);
        return nullptr;
      },
      &var);
}

FormulaPtr substitute_variable(const FormulaPtr& f, const std::string& var,
                               std::int64_t value) {
  auto free = free_variables(f);
  if (std::find(free.begin(), free.end(), var) == free.end()) {
    throw Error(ErrorCode::kUnboundTarget, "variable '" + var + "' is not free in " + to_string(f));
  }
  return substitute_variable_unchecked(f, var, value);
}

FormulaPtr substitute_gmax(const FormulaPtr& f, std::int64_t gamma_max) {
  return rewrite_props(
      f,
      [&](const ValueExpr& e) -> ValueExprPtr {
        if (e.op == ValueOp::kGmax) return ValueExpr::constant(gamma_max);
        return nullptr;
      },
      nullptr);
}

FormulaPtr substitute_value_placeholder(const FormulaPtr& f, std::int64_t value) {
  return rewrite_props(
      f,
      [&](const ValueExpr& e) -> ValueExprPtr {
        if (e.op == ValueOp::kPlaceholder) return ValueExpr::constant(value);
        return nullptr;
      },
      nullptr);
}

FormulaPtr substitute_state_placeholder(const FormulaPtr& f, const FormulaPtr& theta) {
  return transform(f, [&](const FormulaPtr& g) -> FormulaPtr {
    return g->kind() == FormulaKind::kPlaceholder ? theta : nullptr;
  });
}

FormulaPtr fold_constants(const FormulaPtr& f) {
  return rewrite_props(f, [](const ValueExpr&) -> ValueExprPtr { return nullptr; }, nullptr);
}

}  // namespace flowlogic
