#include "flowlogic/lp.hpp"

#include <algorithm>

#include "flowlogic/error.hpp"

namespace flowlogic {

std::size_t LinearSystem::add_variable(const std::string& name,
                                       std::optional<Rational> upper) {
  if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
    throw Error(ErrorCode::kMalformed, "variable '" + name + "' declared twice");
  }
  names_.push_back(name);
  upper_.push_back(std::move(upper));
  return names_.size() - 1;
}

void LinearSystem::add_constraint(LinearConstraint constraint) {
  for (const auto& term : constraint.terms) {
    if (term.variable >= names_.size()) {
      throw Error(ErrorCode::kMalformed, "constraint uses an undeclared variable");
    }
  }
  constraints_.push_back(std::move(constraint));
}

namespace {

// Dense simplex tableau over rows A x = b, x >= 0, b >= 0.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t columns)
      : a_(rows, std::vector<Rational>(columns + 1)), basis_(rows), columns_(columns) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][columns_]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t columns() const { return columns_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / a_[r][c];
    for (auto& x : a_[r]) x *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || a_[i][c] == 0) continue;
      Rational factor = a_[i][c];
      for (std::size_t j = 0; j <= columns_; ++j) {
        if (a_[r][j] != 0) a_[i][j] -= factor * a_[r][j];
      }
    }
    basis_[r] = c;
  }

  // Maximizes cost . x over columns with allowed[j]; Bland's rule for both
  // the entering column and ties in the ratio test. Returns false when
  // unbounded.
  bool maximize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    std::vector<bool> in_basis(columns_);
    while (true) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (std::size_t b : basis_) in_basis[b] = true;
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < columns_ && !entering; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < a_.size(); ++i) {
          if (a_[i][j] != 0) reduced -= cost[basis_[i]] * a_[i][j];
        }
        if (reduced > 0) entering = j;
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Rational best;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i][*entering] <= 0) continue;
        Rational ratio = a_[i][columns_] / a_[i][*entering];
        if (!leaving || ratio < best || (ratio == best && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  Rational value(std::size_t column) const {
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (basis_[i] == column) return a_[i][columns_];
    }
    return 0;
  }

 private:
  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
  std::size_t columns_;
};

struct Row {
  std::vector<std::pair<std::size_t, Rational>> terms;
  Relation relation;
  Rational rhs;
};

}  // namespace

std::optional<std::vector<Rational>> strict_rational_feasibility(
    const LinearSystem& system) {
  const std::size_t n = system.num_variables();
  const std::size_t eps = n;
  bool has_strict = false;
  std::vector<Row> rows;

  for (std::size_t i = 0; i < n; ++i) {
    if (const auto& ub = system.upper_bound(i)) {
      rows.push_back({{{i, Rational(1)}}, Relation::kLessEq, *ub});
    }
  }
  for (const auto& c : system.constraints()) {
    Row row{{}, c.relation, c.rhs};
    for (const auto& t : c.terms) {
      auto it = std::find_if(row.terms.begin(), row.terms.end(),
                             [&](const auto& p) { return p.first == t.variable; });
      if (it == row.terms.end()) {
        row.terms.emplace_back(t.variable, t.coefficient);
      } else {
        it->second += t.coefficient;
      }
    }
    if (c.relation == Relation::kGreater) {
      row.terms.emplace_back(eps, Rational(-1));
      row.relation = Relation::kGreaterEq;
      has_strict = true;
    } else if (c.relation == Relation::kLess) {
      row.terms.emplace_back(eps, Rational(1));
      row.relation = Relation::kLessEq;
      has_strict = true;
    }
    rows.push_back(std::move(row));
  }
  if (has_strict) rows.push_back({{{eps, Rational(1)}}, Relation::kLessEq, Rational(1)});

  // Columns: structural (n), epsilon, one slack per inequality row, one
  // artificial per row.
  std::size_t slack_count = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::kEqual) ++slack_count;
  }
  const std::size_t slack_base = n + 1;
  const std::size_t art_base = slack_base + slack_count;
  const std::size_t columns = art_base + rows.size();
  Tableau tab(rows.size(), columns);

  std::size_t next_slack = slack_base;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [var, coef] : rows[r].terms) tab.at(r, var) += coef;
    if (rows[r].relation == Relation::kLessEq) tab.at(r, next_slack++) = 1;
    if (rows[r].relation == Relation::kGreaterEq) tab.at(r, next_slack++) = -1;
    tab.rhs(r) = rows[r].rhs;
    if (tab.rhs(r) < 0) {
      for (std::size_t j = 0; j <= columns; ++j) tab.at(r, j) = -tab.at(r, j);
    }
    tab.at(r, art_base + r) = 1;
    tab.basis()[r] = art_base + r;
  }

  std::vector<bool> allowed(columns, true);
  if (!has_strict) allowed[eps] = false;
  std::vector<Rational> phase1(columns, 0);
  for (std::size_t j = art_base; j < columns; ++j) phase1[j] = -1;
  tab.maximize(phase1, allowed);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (tab.basis()[r] >= art_base && tab.rhs(r) != 0) return std::nullopt;
  }

  // Drive remaining zero-valued artificials out of the basis.
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basis()[r] < art_base) {
      ++r;
      continue;
    }
    std::optional<std::size_t> column;
    for (std::size_t j = 0; j < art_base && !column; ++j) {
      if (allowed[j] && tab.at(r, j) != 0) column = j;
    }
    if (column) {
      tab.pivot(r, *column);
      ++r;
    } else {
      tab.drop_row(r);
    }
  }
  for (std::size_t j = art_base; j < columns; ++j) allowed[j] = false;

  if (has_strict) {
    std::vector<Rational> phase2(columns, 0);
    phase2[eps] = 1;
    tab.maximize(phase2, allowed);
    if (tab.value(eps) <= 0) return std::nullopt;
  }
  std::vector<Rational> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = tab.value(i);
  return assignment;
}

bool satisfies(const LinearSystem& system, const std::vector<Rational>& assignment) {
  if (assignment.size() != system.num_variables()) return false;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] < 0) return false;
    if (system.upper_bound(i) && assignment[i] > *system.upper_bound(i)) return false;
  }
  for (const auto& c : system.constraints()) {
    Rational lhs = 0;
    for (const auto& t : c.terms) lhs += t.coefficient * assignment[t.variable];
    bool ok = false;
    switch (c.relation) {
      case Relation::kLess: ok = lhs < c.rhs; break;
      case Relation::kLessEq: ok = lhs <= c.rhs; break;
      case Relation::kEqual: ok = lhs == c.rhs; break;
      case Relation::kGreaterEq: ok = lhs >= c.rhs; break;
      case Relation::kGreater: ok = lhs > c.rhs; break;
    }
    if (!ok) return false;
  }
  return true;
}

ConstrainedFlowResult real_vertex_constrained_flow(
    const FlowNetwork& net, const std::vector<VertexRange>& ranges) {
  if (ranges.size() != net.num_vertices()) {
    throw Error(ErrorCode::kPrecondition, "one range per vertex is required");
  }
  for (const auto& r : ranges) {
    if (r.empty) return {ConstrainedFlowStatus::kEmptyRange, std::nullopt};
  }
  LinearSystem system;
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    system.add_variable("e" + std::to_string(e),
                        make_rational(std::max<std::int64_t>(net.edge(e).capacity, 0)));
  }
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    if (v == net.source() || net.is_target(v)) continue;
    LinearConstraint balance{{}, Relation::kEqual, Rational(0)};
    for (EdgeId e : net.in_edges(v)) balance.terms.push_back({e, Rational(1)});
    for (EdgeId e : net.out_edges(v)) balance.terms.push_back({e, Rational(-1)});
    system.add_constraint(std::move(balance));
  }
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    const VertexRange& r = ranges[v];
    std::vector<LinearTerm> terms;
    for (EdgeId e : v == net.source() ? net.out_edges(v) : net.in_edges(v)) {
      terms.push_back({e, Rational(1)});
    }
    if (r.lo > 0 || r.lo_strict) {
      system.add_constraint({terms, r.lo_strict ? Relation::kGreater : Relation::kGreaterEq,
                             make_rational(r.lo)});
    }
    if (r.hi) {
      system.add_constraint({terms, r.hi_strict ? Relation::kLess : Relation::kLessEq,
                             make_rational(*r.hi)});
    }
  }
  auto solution = strict_rational_feasibility(system);
  if (!solution) return {ConstrainedFlowStatus::kInfeasible, std::nullopt};
  return {ConstrainedFlowStatus::kFeasible, FlowFunction::rational(std::move(*solution))};
}

}  // namespace flowlogic
