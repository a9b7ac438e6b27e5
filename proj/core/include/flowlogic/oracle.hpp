#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "flowlogic/flow.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"
#include "flowlogic/query.hpp"

namespace flowlogic {

// Brute-force reference implementations. Everything here enumerates
// explicitly and is meant for small instances only.

struct OracleBudget {
  // Upper limit on the product of (c(e) + 1) over all edges.
  std::uint64_t flow_space = 2'000'000;
  // Upper limit on the number of paths enumerated for one path quantifier
  // at one vertex.
  std::size_t paths = 200'000;
  // Path length cap; nullopt uses |V| * (temporal depth + 1), never more
  // than |V| * 2^closure.
  std::optional<std::size_t> path_bound;
};

// All integral flows, edges assigned in id order with conservation pruning.
// Throws Error(kBudgetExceeded).
std::vector<FlowFunction> enumerate_flows(const FlowNetwork& net, const OracleBudget& budget = {});

// Extensional semantics: flow quantifiers over enumerate_flows (maximal
// ones for AfMax / EfMax), path quantifiers over explicitly enumerated
// paths, value quantifiers over [0, C_N]. Real flow quantifiers throw
// Error(kPrecondition).
bool brute_check(const FlowNetwork& net, const FormulaPtr& phi, const OracleBudget& budget = {});

// Same, as the set of satisfying vertices.
VertexSet brute_check_set(const FlowNetwork& net, const FormulaPtr& phi,
                          const OracleBudget& budget = {});

// Truth of the path quantifier at every vertex under a fixed flow, by path
// enumeration (with past: source-target paths through the vertex).
VertexSet brute_path_quantifier(const FlowNetwork& net, const FlowFunction& flow,
                                PathQuantifier q, const FormulaPtr& psi,
                                const OracleBudget& budget = {});

// Literals are +i / -i for variable i >= 1.
struct CnfFormula {
  int num_variables = 0;
  std::vector<std::vector<int>> clauses;
};

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

// A satisfying assignment (index i - 1 for variable i), or nullopt.
std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f);

std::size_t literal_count(const CnfFormula& f, int literal);

// Equisatisfiable formula in which every literal occurs equally often,
// padded with tautological clauses. Throws Error(kTooFewVariables) for
// fewer than two variables.
CnfFormula balance_cnf(const CnfFormula& f);

struct CnfInstance {
  FlowNetwork network;
  FormulaPtr formula;
  std::int64_t k = 0;
  // positive_vertex[i] / negative_vertex[i] carry literal +(i+1) / -(i+1).
  std::vector<VertexId> positive_vertex;
  std::vector<VertexId> negative_vertex;
};

// Layered network s -> variables -> literals -> clauses -> t with the
// formula Ef A(= kn & X X (= k | = 0) & X X X >= 1). Throws
// Error(kNotBalanced).
CnfInstance cnf_to_network(const CnfFormula& f);

// Literal vertices carrying flow k are true.
std::vector<bool> decode_assignment(const CnfInstance& instance, const FlowFunction& flow);

// Every g in [0, sum of capacities] with decide(f[? <- g]); `= ?` allowed.
// Throws Error(kNoPlaceholder) when f has no value placeholder.
std::vector<std::int64_t> enumerate_value_solutions(const FlowNetwork& net, const FormulaPtr& f,
                                                    const Decider& decide = {});

// Tree unwinding from the source: vertices are paths, named by joining
// vertex names with '.'. nullopt depth unwinds fully and throws
// Error(kCyclicFullUnwind) on cyclic networks; a finite depth keeps paths of
// at most that many edges and prunes branches that no longer reach a target.
FlowNetwork unwind(const FlowNetwork& net, std::optional<std::size_t> depth = std::nullopt);

}  // namespace flowlogic
