#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"

namespace flowlogic {

// Decides a closed formula on a network. Defaults to check(net, f).satisfied.
using Decider = std::function<bool(const FlowNetwork&, const FormulaPtr&)>;

enum class Polarity { kPositive, kNegative };
enum class QueryClass { kLowerBound, kUpperBound };

std::string_view to_string(Polarity p);
std::string_view to_string(QueryClass c);

struct ValueQuery {
  FormulaPtr formula;
  CmpOp relation = CmpOp::kGe;
  Polarity polarity = Polarity::kPositive;
  QueryClass query_class = QueryClass::kLowerBound;
};

// Throws Error(kNoPlaceholder), Error(kMultiplePlaceholders) or
// Error(kEqualsPlaceholder).
ValueQuery classify_value_query(const FormulaPtr& f);

struct ValueSolution {
  std::int64_t strongest = 0;
  // Every solution: [lo, hi].
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  int check_calls = 0;
};

// Binary search over [0, sum of capacities]. nullopt when no value solves
// the query.
std::optional<ValueSolution> strongest_value_solution(const FlowNetwork& net, const ValueQuery& q,
                                                      const Decider& decide = {});

struct PropQuery {
  FormulaPtr formula;
  Polarity polarity = Polarity::kPositive;
};

// Throws Error(kNoPlaceholder) or Error(kMultiplePlaceholders).
PropQuery classify_prop_query(const FormulaPtr& f);

// A Boolean function over the network's propositions: bit r of `table` is
// its value on the assignment whose bit i says whether ap[i] holds.
struct TruthTable {
  std::vector<std::string> ap;
  std::uint64_t table = 0;
};

// Disjunction of minterms; false for the empty table.
FormulaPtr to_formula(const TruthTable& t);

// Whether every row of a is a row of b.
bool implies(const TruthTable& a, const TruthTable& b);

// The implication-minimal solutions (positive queries) or maximal ones
// (negative queries), in increasing table order. Throws
// Error(kApLimitExceeded) when the network has more than ap_limit
// propositions.
std::vector<TruthTable> strongest_prop_solutions(const FlowNetwork& net, const PropQuery& q,
                                                 std::size_t ap_limit = 3,
                                                 const Decider& decide = {});

}  // namespace flowlogic
