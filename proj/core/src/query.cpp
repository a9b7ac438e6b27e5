#include "flowlogic/query.hpp"

#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"

namespace flowlogic {

std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

std::string_view to_string(QueryClass c) {
  return c == QueryClass::kLowerBound ? "lower_bound" : "upper_bound";
}

namespace {

bool is_value_placeholder(const Formula& f) {
  return f.kind() == FormulaKind::kFlowProp && f.expr() && f.expr()->op == ValueOp::kPlaceholder;
}

struct Occurrence {
  int count = 0;
  bool negative = false;
  CmpOp relation = CmpOp::kGe;
};

void find_placeholders(const FormulaPtr& f, bool negative, bool value, Occurrence& out) {
  bool hit = value ? is_value_placeholder(*f) : f->kind() == FormulaKind::kPlaceholder;
  if (hit) {
    ++out.count;
    out.negative = negative;
    out.relation = f->cmp();
    return;
  }
  for (std::size_t i = 0; i < f->children().size(); ++i) {
    bool flip = f->kind() == FormulaKind::kNot || (f->kind() == FormulaKind::kImplies && i == 0);
    find_placeholders(f->child(i), negative != flip, value, out);
  }
}

Occurrence single_placeholder(const FormulaPtr& f, bool value) {
  Occurrence occ;
  find_placeholders(f, false, value, occ);
  if (occ.count == 0) throw Error(ErrorCode::kNoPlaceholder, "no placeholder in " + to_string(f));
  if (occ.count > 1) {
    throw Error(ErrorCode::kMultiplePlaceholders, "more than one placeholder in " + to_string(f));
  }
  return occ;
}

Decider or_default(const Decider& decide) {
  if (decide) return decide;
  return [](const FlowNetwork& net, const FormulaPtr& f) { return check(net, f).satisfied; };
}

}  // namespace

ValueQuery classify_value_query(const FormulaPtr& f) {
  Occurrence occ = single_placeholder(f, true);
  if (occ.relation == CmpOp::kEq) {
    throw Error(ErrorCode::kEqualsPlaceholder, "value queries cannot use (= ?)");
  }
  ValueQuery q;
  q.formula = f;
  q.relation = occ.relation;
  q.polarity = occ.negative ? Polarity::kNegative : Polarity::kPositive;
  bool greater = occ.relation == CmpOp::kGt || occ.relation == CmpOp::kGe;
  q.query_class = greater != occ.negative ? QueryClass::kLowerBound : QueryClass::kUpperBound;
  return q;
}

std::optional<ValueSolution> strongest_value_solution(const FlowNetwork& net, const ValueQuery& q,
                                                      const Decider& decide) {
  Decider d = or_default(decide);
  const std::int64_t top = net.capacity_sum();
  ValueSolution sol;
  auto solves = [&](std::int64_t g) {
    ++sol.check_calls;
    return d(net, substitute_value_placeholder(q.formula, g));
  };

  if (q.query_class == QueryClass::kLowerBound) {
    // Solutions are down-closed: find the largest.
    if (!solves(0)) return std::nullopt;
    std::int64_t lo = 0;
    std::int64_t hi = top;
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (solves(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    sol.strongest = lo;
    sol.lo = 0;
    sol.hi = lo;
  } else {
    // Solutions are up-closed: find the smallest.
    if (!solves(top)) return std::nullopt;
    std::int64_t lo = 0;
    std::int64_t hi = top;
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (solves(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    sol.strongest = lo;
    sol.lo = lo;
    sol.hi = top;
  }
  return sol;
}

PropQuery classify_prop_query(const FormulaPtr& f) {
  Occurrence occ = single_placeholder(f, false);
  PropQuery q;
  q.formula = f;
  q.polarity = occ.negative ? Polarity::kNegative : Polarity::kPositive;
  return q;
}

FormulaPtr to_formula(const TruthTable& t) {
  const std::size_t rows = std::size_t{1} << t.ap.size();
  std::vector<FormulaPtr> minterms;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!((t.table >> r) & 1u)) continue;
    std::vector<FormulaPtr> lits;
    for (std::size_t i = 0; i < t.ap.size(); ++i) {
      FormulaPtr a = Formula::atom(t.ap[i]);
      lits.push_back(((r >> i) & 1u) ? a : Formula::negation(a));
    }
    minterms.push_back(Formula::conjunction(std::move(lits)));
  }
  return Formula::disjunction(std::move(minterms));
}

bool implies(const TruthTable& a, const TruthTable& b) { return (a.table & ~b.table) == 0; }

std::vector<TruthTable> strongest_prop_solutions(const FlowNetwork& net, const PropQuery& q,
                                                 std::size_t ap_limit, const Decider& decide) {
  const auto& ap = net.ap();
  if (ap.size() > ap_limit || ap.size() > 5) {
    throw Error(ErrorCode::kApLimitExceeded, std::to_string(ap.size()) +
                                                 " propositions exceed the limit of " +
                                                 std::to_string(ap_limit));
  }
  Decider d = or_default(decide);
  const std::size_t rows = std::size_t{1} << ap.size();
  const std::uint64_t count = std::uint64_t{1} << rows;
  std::vector<TruthTable> solutions;
  for (std::uint64_t table = 0; table < count; ++table) {
    TruthTable t{ap, table};
    if (d(net, substitute_state_placeholder(q.formula, to_formula(t)))) solutions.push_back(t);
  }
  std::vector<TruthTable> strongest;
  for (const auto& a : solutions) {
    bool dominated = false;
    for (const auto& b : solutions) {
      if (a.table == b.table) continue;
      bool better = q.polarity == Polarity::kPositive ? implies(b, a) : implies(a, b);
      if (better) {
        dominated = true;
        break;
      }
    }
    if (!dominated) strongest.push_back(a);
  }
  return strongest;
}

}  // namespace flowlogic
