#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowlogic/formula.hpp"

namespace flowlogic {

struct CbflFormula;
using CbflPtr = std::shared_ptr<const CbflFormula>;

struct FlowBound {
  CmpOp op = CmpOp::kGe;
  std::int64_t value = 0;
};

// One universal requirement A X^k xi or A X^k G xi. Steps may be strong (X)
// or weak (!X!); the leaf is a flow proposition or a closed assertion.
struct CbflRequirement {
  std::vector<bool> strong_steps;
  bool globally = false;
  std::optional<FlowBound> flow;
  CbflPtr assertion;
};

// E(A psi_1 & ... & A psi_n) with an existential flow quantifier.
struct CbflExistential {
  FlowQuantifier quantifier = FlowQuantifier::kEf;
  std::vector<CbflRequirement> requirements;
};

// Boolean assertion over atomic propositions and existential blocks.
struct CbflFormula {
  enum class Kind { kTrue, kFalse, kAtom, kNot, kAnd, kOr, kExists };

  Kind kind = Kind::kTrue;
  std::string atom;
  std::vector<CbflPtr> children;
  std::shared_ptr<const CbflExistential> block;
  int level = 0;
};

// Throws Error(kNotConjunctive) naming the offending subformula. Flow
// propositions must have constant bounds (substitute gmax first).
CbflPtr normalize_cbfl(const FormulaPtr& f);

// The normal form as an ordinary formula (weak steps print as !X!).
FormulaPtr to_formula(const CbflPtr& f);

}  // namespace flowlogic
