#include "flowlogic/checker.hpp"

#include <algorithm>
#include <set>

#include "flowlogic/error.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "flowlogic/lp.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/semantics.hpp"

namespace flowlogic {

std::int64_t compute_cn(const FlowNetwork& net) { return 1 + net.capacity_sum(); }

namespace {

bool has_positive_quantifier(const FormulaPtr& f) {
  return contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kPathQuant && is_positive(g.path_quantifier());
  });
}

bool expr_uses_div(const ValueExprPtr& e) {
  if (!e) return false;
  return e->op == ValueOp::kDiv || expr_uses_div(e->lhs) || expr_uses_div(e->rhs);
}

bool uses_div(const FormulaPtr& f) {
  return contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kFlowProp && expr_uses_div(g.expr());
  });
}

bool has_quantifier(const FormulaPtr& f) {
  return contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kFlowQuant || g.kind() == FormulaKind::kValueQuant;
  });
}

void collect_thresholds(const FormulaPtr& f, std::set<std::int64_t>& out) {
  if (f->kind() == FormulaKind::kFlowProp) {
    auto value = evaluate(f->expr());
    if (!value) {
      throw Error(ErrorCode::kPrecondition,
                  "flow proposition '" + to_string(f) + "' has a non-constant bound");
    }
    out.insert(*value);
  }
  for (const auto& c : f->children()) collect_thresholds(c, out);
}

VertexSet complement(VertexSet s) {
  s.flip();
  return s;
}

// One cell of the partition of [0, top] by the thresholds, with a value
// inside it that decides every flow proposition the same way as all others.
struct Cell {
  VertexRange range;
  Rational rep;
};

std::vector<Cell> make_cells(const std::set<std::int64_t>& thresholds, std::int64_t top,
                             bool real) {
  std::vector<std::int64_t> points;
  for (auto t : thresholds) {
    if (t >= 0 && t <= top) points.push_back(t);
  }
  std::vector<Cell> cells;
  if (!real) {
    std::int64_t cur = 0;
    for (auto t : points) {
      if (cur <= t - 1) cells.push_back({VertexRange::closed(cur, t - 1), make_rational(cur)});
      cells.push_back({VertexRange::point(t), make_rational(t)});
      cur = t + 1;
    }
    if (cur <= top) cells.push_back({VertexRange::closed(cur, top), make_rational(cur)});
    return cells;
  }
  std::optional<std::int64_t> prev;
  for (auto t : points) {
    if (t > 0) {
      VertexRange r;
      r.lo = prev.value_or(0);
      r.lo_strict = prev.has_value();
      r.hi = t;
      r.hi_strict = true;
      Rational rep = prev ? Rational(make_rational(*prev + t) / 2) : make_rational(0);
      cells.push_back({r, rep});
    }
    cells.push_back({VertexRange::point(t), make_rational(t)});
    prev = t;
  }
  if (!prev) {
    cells.push_back({VertexRange::closed(0, top), make_rational(0)});
  } else if (*prev < top) {
    VertexRange r;
    r.lo = *prev;
    r.lo_strict = true;
    r.hi = top;
    cells.push_back({r, make_rational(*prev) + Rational(1, 2)});
  }
  return cells;
}

// Capacity-based bound on f(v).
std::vector<std::int64_t> vertex_bounds(const FlowNetwork& net) {
  std::vector<std::int64_t> bound(net.num_vertices(), 0);
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    std::int64_t in = 0;
    std::int64_t out = 0;
    for (EdgeId e : net.in_edges(v)) in += net.edge(e).capacity;
    for (EdgeId e : net.out_edges(v)) out += net.edge(e).capacity;
    if (v == net.source()) {
      bound[v] = out;
    } else if (net.is_target(v)) {
      bound[v] = in;
    } else {
      bound[v] = std::min(in, out);
    }
  }
  return bound;
}

bool cell_possible(const Cell& cell, std::int64_t bound) {
  if (cell.range.lo > bound) return false;
  return !(cell.range.lo == bound && cell.range.lo_strict);
}

std::optional<bool> decide_on_interval(CmpOp op, std::int64_t gamma, std::int64_t hi) {
  switch (op) {
    case CmpOp::kGt:
      if (gamma < 0) return true;
      if (hi <= gamma) return false;
      break;
    case CmpOp::kGe:
      if (gamma <= 0) return true;
      if (hi < gamma) return false;
      break;
    case CmpOp::kLt:
      if (hi < gamma) return true;
      if (gamma <= 0) return false;
      break;
    case CmpOp::kLe:
      if (hi <= gamma) return true;
      if (gamma < 0) return false;
      break;
    case CmpOp::kEq:
      if (gamma < 0 || gamma > hi) return false;
      if (hi == 0) return true;
      break;
  }
  return std::nullopt;
}

bool compare_rational(const Rational& x, CmpOp op, std::int64_t gamma) {
  Rational g = make_rational(gamma);
  switch (op) {
    case CmpOp::kGt: return x > g;
    case CmpOp::kGe: return x >= g;
    case CmpOp::kLt: return x < g;
    case CmpOp::kLe: return x <= g;
    case CmpOp::kEq: return x == g;
  }
  return false;
}

// Existential flow quantifier by enumeration of threshold cells per vertex
// in id order. Each partial assignment is checked for realizability and
// evaluated three-valued: vertices where the body must hold are settled with
// the realizing flow, and branches where it cannot hold anywhere still open
// are cut.
class CellSearch {
 public:
  CellSearch(const FlowNetwork& net, FlowQuantifier q, const FormulaPtr& body,
             const std::unordered_map<std::string, VertexSet>& labels,
             std::optional<std::int64_t> gamma_max, const VertexSet& interest)
      : net_(net), q_(q), body_(body), gamma_max_(gamma_max), interest_(interest) {
    std::set<std::int64_t> thresholds;
    collect_thresholds(body, thresholds);
    cells_ = make_cells(thresholds, net.capacity_sum(), is_real(q));
    bounds_ = vertex_bounds(net);
    const std::size_t n = net.num_vertices();
    ranges_.assign(n, VertexRange::unbounded());
    reps_.assign(n, make_rational(0));
    result_.holds.assign(n, false);
    result_.witnesses.assign(n, std::nullopt);
    val_.extra_labels = labels;
    val_.flow_prop = [this](VertexId u, CmpOp op, std::int64_t gamma) -> std::optional<bool> {
      if (u < assigned_) return compare_rational(reps_[u], op, gamma);
      return decide_on_interval(op, gamma, bounds_[u]);
    };
  }

  FlowQuantifierResult run() {
    auto r = realize();
    if (r.feasible()) dfs(0, *r.flow);
    return std::move(result_);
  }

 private:
  ConstrainedFlowResult realize() const {
    return is_real(q_) ? real_vertex_constrained_flow(net_, ranges_)
                       : vertex_constrained_flow(net_, ranges_);
  }

  // `flow` realizes the cells chosen for vertices below v.
  void dfs(VertexId v, const FlowFunction& flow) {
    StateBounds b = eval_state_bounds(net_, val_, body_);
    bool open = false;
    for (VertexId u = 0; u < net_.num_vertices(); ++u) {
      if (!interest_[u] || result_.holds[u]) continue;
      if (b.must[u]) {
        result_.holds[u] = true;
        result_.witnesses[u] = flow;
      } else if (b.may[u]) {
        open = true;
      }
    }
    if (!open || v == net_.num_vertices()) return;
    for (const Cell& cell : cells_) {
      if (!cell_possible(cell, bounds_[v])) continue;
      VertexRange range = cell.range;
      if (is_max(q_) && v == net_.source()) range = range.intersect(VertexRange::point(*gamma_max_));
      if (range.empty) continue;
      ranges_[v] = range;
      auto r = realize();
      if (r.feasible()) {
        reps_[v] = cell.rep;
        assigned_ = v + 1;
        dfs(v + 1, *r.flow);
        assigned_ = v;
      }
    }
    ranges_[v] = VertexRange::unbounded();
  }

  const FlowNetwork& net_;
  FlowQuantifier q_;
  FormulaPtr body_;
  std::optional<std::int64_t> gamma_max_;
  const VertexSet& interest_;
  PartialValuation val_;
  std::vector<Cell> cells_;
  std::vector<std::int64_t> bounds_;
  std::vector<VertexRange> ranges_;
  std::vector<Rational> reps_;
  std::size_t assigned_ = 0;
  FlowQuantifierResult result_;
};

FlowQuantifierResult flow_quantifier_on(const FlowNetwork& net, FlowQuantifier q,
                                        const FormulaPtr& xi,
                                        const std::unordered_map<std::string, VertexSet>& labels,
                                        std::optional<std::int64_t> gamma_max,
                                        const VertexSet& interest) {
  if (is_max(q) && !gamma_max) gamma_max = max_flow(net).value;
  if (!is_universal(q)) return CellSearch(net, q, xi, labels, gamma_max, interest).run();
  FlowQuantifierResult r =
      CellSearch(net, existential(q), Formula::negation(xi), labels, gamma_max, interest).run();
  r.holds = complement(std::move(r.holds));
  return r;
}

FlowFunction restrict_flow(const FlowFunction& refined, std::size_t num_edges) {
  std::vector<Rational> values;
  for (EdgeId e = 0; e < num_edges; ++e) values.push_back(refined[2 * e]);
  if (refined.kind() == FlowKind::kIntegral) {
    std::vector<std::int64_t> ints;
    for (const auto& x : values) ints.push_back(to_int64(x));
    return FlowFunction::integral(std::move(ints));
  }
  return FlowFunction::rational(std::move(values));
}

class Checker {
 public:
  Checker(const FlowNetwork& net, const CheckOptions& options)
      : original_(net), net_(&net), options_(options) {
    gamma_max_ = max_flow(net).value;
    range_top_ = compute_cn(net) + options.value_range_extension;
  }

  // Vertices of the original network satisfying the closed formula f.
  VertexSet run(FormulaPtr f) {
    if (uses_gmax(f)) f = substitute_gmax(f, gamma_max_);
    f = commute_path_flow_quantifiers(f);
    if (has_positive_quantifier(f)) {
      refined_ = refine_for_positive_paths(original_);
      net_ = &refined_->network;
      f = rewrite_positive_quantifiers(f, refined_->edge_prop);
    }
    root_ = f;
    FormulaPtr resolved = resolve(f);
    Valuation val;
    val.extra_labels = labels_;
    VertexSet sat = eval_state_set(*net_, val, resolved);
    sat.resize(original_.num_vertices());
    return sat;
  }

  std::vector<VertexLabel> labels() const {
    std::vector<VertexLabel> out = order_;
    for (auto& l : out) l.vertices.resize(original_.num_vertices());
    return out;
  }

  std::optional<FlowFunction> root_flow() const {
    if (!root_flow_ || !refined_) return root_flow_;
    return restrict_flow(*root_flow_, original_.num_edges());
  }

 private:
  FormulaPtr add_label(const FormulaPtr& f, VertexSet set) {
    std::string name = "#q" + std::to_string(order_.size() + 1);
    labels_[name] = set;
    order_.push_back({name, to_string(f), std::move(set)});
    return Formula::atom(name);
  }

  // Flow-dependent value quantifiers inside a flow body become finite
  // conjunctions or disjunctions.
  FormulaPtr expand_value_quantifiers(const FormulaPtr& f) {
    if (f->kind() == FormulaKind::kFlowQuant) return f;
    if (f->kind() == FormulaKind::kValueQuant && !binds_free(f)) {
      return expand_value_quantifiers(f->child());
    }
    if (f->kind() == FormulaKind::kValueQuant && depends_on_flow(f)) {
      std::vector<FormulaPtr> parts;
      for (std::int64_t g = 0; g <= range_top_; ++g) {
        parts.push_back(expand_value_quantifiers(
            substitute_variable_unchecked(f->child(), f->name(), g)));
      }
      return f->value_quantifier() == ValueQuantifier::kForall
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
    if (f->children().empty() || !contains_kind(f, FormulaKind::kValueQuant)) return f;
    std::vector<FormulaPtr> kids;
    for (const auto& c : f->children()) kids.push_back(expand_value_quantifiers(c));
    return f->with_children(std::move(kids));
  }

  FormulaPtr resolve(const FormulaPtr& f) {
    switch (f->kind()) {
      case FormulaKind::kFlowQuant: {
        FormulaPtr body = resolve(expand_value_quantifiers(f->child()));
        if (has_open_temporal(body)) {
          throw Error(ErrorCode::kUnsupportedNesting,
                      "flow quantifier over a path formula: " + to_string(f));
        }
        // Only the source matters for the outermost quantifier.
        VertexSet interest(net_->num_vertices(), f != root_);
        interest[net_->source()] = true;
        FlowQuantifierResult r =
            flow_quantifier_on(*net_, f->flow_quantifier(), body, labels_, gamma_max_, interest);
        if (f == root_) root_flow_ = r.witnesses[net_->source()];
        return add_label(f, std::move(r.holds));
      }
      case FormulaKind::kValueQuant: {
        if (!binds_free(f)) return resolve(f->child());
        bool forall = f->value_quantifier() == ValueQuantifier::kForall;
        VertexSet acc(net_->num_vertices(), forall);
        for (std::int64_t g = 0; g <= range_top_; ++g) {
          FormulaPtr inst = resolve(substitute_variable_unchecked(f->child(), f->name(), g));
          Valuation val;
          val.extra_labels = labels_;
          VertexSet s = eval_state_set(*net_, val, inst);
          for (VertexId v = 0; v < acc.size(); ++v) acc[v] = forall ? (acc[v] && s[v]) : (acc[v] || s[v]);
        }
        return add_label(f, std::move(acc));
      }
      default: {
        if (f->children().empty() || !has_quantifier(f)) return f;
        std::vector<FormulaPtr> kids;
        for (const auto& c : f->children()) kids.push_back(resolve(c));
        return f->with_children(std::move(kids));
      }
    }
  }

  const FlowNetwork& original_;
  std::optional<RefinedNetwork> refined_;
  const FlowNetwork* net_;
  CheckOptions options_;
  std::int64_t gamma_max_ = 0;
  std::int64_t range_top_ = 0;
  std::unordered_map<std::string, VertexSet> labels_;
  std::vector<VertexLabel> order_;
  FormulaPtr root_;
  std::optional<FlowFunction> root_flow_;
};

void require_closed(const FormulaPtr& phi) {
  std::string problem = closedness_problem(phi);
  if (!problem.empty()) throw Error(ErrorCode::kNotClosed, problem);
}

}  // namespace

Verdict check(const FlowNetwork& net, const FormulaPtr& phi, const CheckOptions& options) {
  require_closed(phi);
  Verdict verdict;
  if (contains_kind(phi, FormulaKind::kValueQuant) && uses_div(phi)) {
    verdict.warnings.push_back(
        "value quantifiers range over [0, C_N]; this bound is not guaranteed complete when div "
        "occurs");
  }
  Checker checker(net, options);
  VertexSet sat = checker.run(phi);
  verdict.satisfied = sat[net.source()];
  verdict.vertex_labels = checker.labels();
  if (phi->kind() == FormulaKind::kFlowQuant) {
    bool universal = is_universal(phi->flow_quantifier());
    if (universal != verdict.satisfied) verdict.witness = checker.root_flow();
  }
  verdict.diagnostics = std::string(verdict.satisfied ? "satisfied" : "not satisfied") +
                        " at source " + net.vertex_name(net.source());
  return verdict;
}

FlowQuantifierResult eval_flow_quantifier(const FlowNetwork& net, FlowQuantifier q,
                                          const FormulaPtr& xi,
                                          const std::unordered_map<std::string, VertexSet>& labels,
                                          std::optional<std::int64_t> gamma_max) {
  if (contains_kind(xi, FormulaKind::kFlowQuant) || contains_kind(xi, FormulaKind::kValueQuant)) {
    throw Error(ErrorCode::kPrecondition,
                "flow quantifier body must not contain flow or value quantifiers");
  }
  FormulaPtr body = xi;
  if (uses_gmax(body) || (is_max(q) && !gamma_max)) {
    if (!gamma_max) gamma_max = max_flow(net).value;
    body = substitute_gmax(body, *gamma_max);
  }
  if (!has_positive_quantifier(body)) {
    return flow_quantifier_on(net, q, body, labels, gamma_max, VertexSet(net.num_vertices(), true));
  }

  RefinedNetwork refined = refine_for_positive_paths(net);
  std::unordered_map<std::string, VertexSet> extended = labels;
  for (auto& [name, set] : extended) set.resize(refined.network.num_vertices(), false);
  FlowQuantifierResult r =
      flow_quantifier_on(refined.network, q, rewrite_positive_quantifiers(body, refined.edge_prop),
                         extended, gamma_max, VertexSet(refined.network.num_vertices(), true));
  r.holds.resize(net.num_vertices());
  r.witnesses.resize(net.num_vertices());
  for (auto& w : r.witnesses) {
    if (w) w = restrict_flow(*w, net.num_edges());
  }
  return r;
}

VertexSet eval_value_quantifier(const FlowNetwork& net, ValueQuantifier q, const std::string& x,
                                const FormulaPtr& body, const CheckOptions& options) {
  FormulaPtr phi = Formula::value(q, x, body);
  require_closed(phi);
  Checker checker(net, options);
  return checker.run(phi);
}

std::optional<FlowFunction> synthesize(const FlowNetwork& net, const FormulaPtr& phi) {
  if (!classify_formula(phi).is_exists_bfl1) {
    throw Error(ErrorCode::kNotExistentialBfl1,
                "synthesis needs a single existential flow quantifier over a flow-quantifier-free "
                "body: " +
                    to_string(phi));
  }
  Verdict v = check(net, phi);
  if (!v.satisfied) return std::nullopt;
  return v.witness;
}

Verdict check_reduction_cnf(const FlowNetwork& net, const FormulaPtr& phi) {
  return check(net, phi);
}

}  // namespace flowlogic
