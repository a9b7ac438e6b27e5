#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowlogic/maxflow.hpp"
#include "flowlogic/network.hpp"
#include "flowlogic/rational.hpp"

namespace flowlogic {

enum class Relation { kLess, kLessEq, kEqual, kGreaterEq, kGreater };

struct LinearTerm {
  std::size_t variable;
  Rational coefficient;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::kLessEq;
  Rational rhs;
};

// Variables are implicitly bounded below by 0; an optional upper bound is
// declared with each variable.
class LinearSystem {
 public:
  // Throws Error(kMalformed) for a repeated name.
  std::size_t add_variable(const std::string& name,
                           std::optional<Rational> upper = std::nullopt);
  // Throws Error(kMalformed) for a term naming an undeclared variable.
  void add_constraint(LinearConstraint constraint);

  std::size_t num_variables() const { return names_.size(); }
  const std::string& variable_name(std::size_t i) const { return names_[i]; }
  const std::optional<Rational>& upper_bound(std::size_t i) const { return upper_[i]; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<LinearConstraint> constraints_;
};

// An assignment satisfying every relation literally (strict ones included),
// or nullopt. Exact two-phase simplex with Bland's rule; strict relations
// share one slack epsilon that is maximized subject to epsilon <= 1.
std::optional<std::vector<Rational>> strict_rational_feasibility(
    const LinearSystem& system);

bool satisfies(const LinearSystem& system, const std::vector<Rational>& assignment);

// Rational flow with f(v) inside ranges[v] for every vertex, strict ends
// respected. `ranges` is indexed by VertexId.
ConstrainedFlowResult real_vertex_constrained_flow(
    const FlowNetwork& net, const std::vector<VertexRange>& ranges);

}  // namespace flowlogic
