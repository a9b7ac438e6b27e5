#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowlogic {

struct ValueExpr;
using ValueExprPtr = std::shared_ptr<const ValueExpr>;

enum class ValueOp { kConst, kVar, kGmax, kPlaceholder, kAdd, kMul, kSub, kDiv };

// Integer expression inside a flow proposition.
struct ValueExpr {
  ValueOp op = ValueOp::kConst;
  std::int64_t value = 0;  // kConst
  std::string name;        // kVar
  ValueExprPtr lhs;
  ValueExprPtr rhs;

  static ValueExprPtr constant(std::int64_t value);
  static ValueExprPtr variable(std::string name);
  static ValueExprPtr gmax();
  static ValueExprPtr placeholder();
  static ValueExprPtr binary(ValueOp op, ValueExprPtr lhs, ValueExprPtr rhs);

  bool is_constant() const { return op == ValueOp::kConst; }
};

enum class CmpOp { kGt, kGe, kLt, kLe, kEq };

std::string_view to_string(CmpOp op);
bool compare(std::int64_t lhs, CmpOp op, std::int64_t rhs);

enum class FormulaKind {
  kTrue,
  kFalse,
  kAtom,
  kFlowProp,
  kPlaceholder,  // `?` in state position
  kNot,
  kAnd,
  kOr,
  kImplies,
  kPathQuant,
  kFlowQuant,
  kValueQuant,
  kNext,
  kUntil,
  kFinally,
  kGlobally,
  kYesterday,
  kSince,
};

enum class PathQuantifier { kA, kE, kAPlus, kEPlus };
enum class FlowQuantifier { kAf, kEf, kAfMax, kEfMax, kAfR, kEfR };
enum class ValueQuantifier { kForall, kExists };

std::string_view to_string(PathQuantifier q);
std::string_view to_string(FlowQuantifier q);

bool is_universal(PathQuantifier q);
bool is_positive(PathQuantifier q);
bool is_universal(FlowQuantifier q);
bool is_max(FlowQuantifier q);
bool is_real(FlowQuantifier q);
// Existential counterpart of the same family (Af -> Ef, AfMax -> EfMax, ...).
FlowQuantifier existential(FlowQuantifier q);
FlowQuantifier dual(FlowQuantifier q);
PathQuantifier dual(PathQuantifier q);

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// One AST type for state and path formulas; which is which depends on the
// context (temporal operators are path formulas). Immutable.
class Formula {
 public:
  FormulaKind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // atom or bound variable
  CmpOp cmp() const { return cmp_; }
  const ValueExprPtr& expr() const { return expr_; }
  PathQuantifier path_quantifier() const { return path_q_; }
  FlowQuantifier flow_quantifier() const { return flow_q_; }
  ValueQuantifier value_quantifier() const { return value_q_; }
  const std::vector<FormulaPtr>& children() const { return children_; }
  const FormulaPtr& child(std::size_t i = 0) const { return children_[i]; }

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr atom(std::string name);
  static FormulaPtr flow_prop(CmpOp op, ValueExprPtr expr);
  static FormulaPtr flow_prop(CmpOp op, std::int64_t value);
  static FormulaPtr placeholder();
  static FormulaPtr negation(FormulaPtr f);
  // n-ary; a single operand is returned unchanged, none gives true / false.
  static FormulaPtr conjunction(std::vector<FormulaPtr> operands);
  static FormulaPtr disjunction(std::vector<FormulaPtr> operands);
  static FormulaPtr implication(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr path(PathQuantifier q, FormulaPtr body);
  static FormulaPtr flow(FlowQuantifier q, FormulaPtr body);
  static FormulaPtr value(ValueQuantifier q, std::string var, FormulaPtr body);
  static FormulaPtr next(FormulaPtr f);
  static FormulaPtr until(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr eventually(FormulaPtr f);
  static FormulaPtr always(FormulaPtr f);
  static FormulaPtr yesterday(FormulaPtr f);
  static FormulaPtr since(FormulaPtr lhs, FormulaPtr rhs);

  // Same node with new children (kinds with children only).
  FormulaPtr with_children(std::vector<FormulaPtr> children) const;

 private:
  Formula() = default;
  static std::shared_ptr<Formula> create(FormulaKind kind);

  FormulaKind kind_ = FormulaKind::kTrue;
  std::string name_;
  CmpOp cmp_ = CmpOp::kEq;
  ValueExprPtr expr_;
  PathQuantifier path_q_ = PathQuantifier::kA;
  FlowQuantifier flow_q_ = FlowQuantifier::kEf;
  ValueQuantifier value_q_ = ValueQuantifier::kForall;
  std::vector<FormulaPtr> children_;
};

bool equal(const ValueExprPtr& a, const ValueExprPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::size_t hash(const FormulaPtr& f);

// Throws SyntaxError with the byte offset of the offending token. A bare
// integer in state position means (= n); a bare identifier bound by an
// enclosing value quantifier means (= x).
FormulaPtr parse_formula(std::string_view text);
// Parses a path formula: temporal operators are allowed at the top level.
FormulaPtr parse_path_formula(std::string_view text);

std::string to_string(const ValueExprPtr& e);
std::string to_string(const FormulaPtr& f);

bool is_temporal(FormulaKind kind);
bool is_past(FormulaKind kind);

// Structural queries.
bool contains(const FormulaPtr& f, const std::function<bool(const Formula&)>& pred);
bool contains_kind(const FormulaPtr& f, FormulaKind kind);
bool uses_gmax(const FormulaPtr& f);
std::size_t depth(const FormulaPtr& f);
std::size_t size(const FormulaPtr& f);

// Bottom-up rebuild: `fn` sees each node after its children were rebuilt and
// may return a replacement or nullptr to keep it.
FormulaPtr transform(const FormulaPtr& f,
                     const std::function<FormulaPtr(const FormulaPtr&)>& fn);

// Constant value of an expression with every name bound; subtraction clamps
// at zero. nullopt when a free variable, gmax, or placeholder remains.
std::optional<std::int64_t> evaluate(const ValueExprPtr& e);

// Replaces free occurrences of `var` by `value` and folds expressions that
// became constant. Throws Error(kUnboundTarget) when `var` is not free in f.
FormulaPtr substitute_variable(const FormulaPtr& f, const std::string& var,
                               std::int64_t value);
// Same, without the free-occurrence check.
FormulaPtr substitute_variable_unchecked(const FormulaPtr& f, const std::string& var,
                                         std::int64_t value);
FormulaPtr substitute_gmax(const FormulaPtr& f, std::int64_t gamma_max);
// Value placeholder (`>= ?`, also `= ?`) by a constant.
FormulaPtr substitute_value_placeholder(const FormulaPtr& f, std::int64_t value);
// State placeholder (`?`) by a formula.
FormulaPtr substitute_state_placeholder(const FormulaPtr& f, const FormulaPtr& theta);

// Folds every constant subexpression of every flow proposition.
FormulaPtr fold_constants(const FormulaPtr& f);

std::vector<std::string> free_variables(const FormulaPtr& f);

// Whether the variable bound by a value quantifier occurs free in its body.
bool binds_free(const FormulaPtr& value_quantifier);

}  // namespace flowlogic
