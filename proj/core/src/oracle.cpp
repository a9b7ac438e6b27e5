#include "flowlogic/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/formula_analysis.hpp"

namespace flowlogic {

std::vector<FlowFunction> enumerate_flows(const FlowNetwork& net, const OracleBudget& budget) {
  std::uint64_t space = 1;
  for (const auto& e : net.edges()) {
    space *= static_cast<std::uint64_t>(e.capacity + 1);
    if (space > budget.flow_space) {
      throw Error(ErrorCode::kBudgetExceeded, "flow space exceeds " +
                                                  std::to_string(budget.flow_space));
    }
  }
  const std::size_t n = net.num_vertices();
  const std::size_t m = net.num_edges();
  // Internal vertices whose last incident edge is e get checked after e.
  std::vector<std::vector<VertexId>> check_after(m);
  for (VertexId v = 0; v < n; ++v) {
    if (v == net.source() || net.is_target(v)) continue;
    std::size_t last = 0;
    bool any = false;
    for (EdgeId e : net.in_edges(v)) last = std::max(last, e), any = true;
    for (EdgeId e : net.out_edges(v)) last = std::max(last, e), any = true;
    if (any) check_after[last].push_back(v);
  }
  std::vector<FlowFunction> out;
  std::vector<std::int64_t> values(m, 0);
  std::vector<std::int64_t> balance(n, 0);
  auto rec = [&](auto&& self, EdgeId e) -> void {
    if (e == m) {
      out.push_back(FlowFunction::integral(values));
      return;
    }
    const Edge& edge = net.edge(e);
    for (std::int64_t x = 0; x <= edge.capacity; ++x) {
      values[e] = x;
      balance[edge.to] += x;
      balance[edge.from] -= x;
      bool ok = true;
      for (VertexId v : check_after[e]) ok = ok && balance[v] == 0;
      if (ok) self(self, e + 1);
      balance[edge.to] -= x;
      balance[edge.from] += x;
    }
    values[e] = 0;
  };
  rec(rec, 0);
  return out;
}

namespace {

std::size_t temporal_depth(const FormulaPtr& f) {
  if (f->kind() == FormulaKind::kPathQuant) return 0;
  std::size_t d = 0;
  for (const auto& c : f->children()) d = std::max(d, temporal_depth(c));
  return d + (is_temporal(f->kind()) ? 1 : 0);
}

struct PathKey {
  const Formula* f;
  std::size_t i;
  bool operator==(const PathKey&) const = default;
};

struct PathKeyHash {
  std::size_t operator()(const PathKey& k) const {
    return std::hash<const void*>{}(k.f) * 31 + k.i;
  }
};

class Oracle {
 public:
  Oracle(const FlowNetwork& net, const OracleBudget& budget) : net_(net), budget_(budget) {}

  void set_flows(std::vector<FlowFunction> flows) { flows_ = std::move(flows); }

  const std::vector<FlowFunction>& flows() {
    if (!flows_) flows_ = enumerate_flows(net_, budget_);
    return *flows_;
  }

  std::int64_t gamma_max() {
    if (!gamma_max_) {
      std::int64_t best = 0;
      for (const auto& f : flows()) {
        best = std::max(best, to_int64(f.vertex_value(net_, net_.source())));
      }
      gamma_max_ = best;
    }
    return *gamma_max_;
  }

  VertexSet eval(const FormulaPtr& f, int flow) {
    int key_flow = depends_on_flow(f) ? flow : -1;
    auto key = std::make_pair(f.get(), key_flow);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    VertexSet out = compute(f, flow);
    memo_.emplace(key, out);
    keep_.push_back(f);
    return out;
  }

 private:
  const FlowFunction& flow_at(int flow) {
    if (flow < 0) throw Error(ErrorCode::kPrecondition, "formula depends on an unbound flow");
    return (*flows_)[static_cast<std::size_t>(flow)];
  }

  VertexSet compute(const FormulaPtr& f, int flow) {
    const std::size_t n = net_.num_vertices();
    switch (f->kind()) {
      case FormulaKind::kTrue: return VertexSet(n, true);
      case FormulaKind::kFalse: return VertexSet(n, false);
      case FormulaKind::kAtom: {
        VertexSet out(n);
        for (VertexId v = 0; v < n; ++v) out[v] = net_.has_label(v, f->name());
        return out;
      }
      case FormulaKind::kFlowProp: {
        auto gamma = evaluate(f->expr());
        if (!gamma) throw Error(ErrorCode::kPrecondition, "open flow proposition " + to_string(f));
        const FlowFunction& g = flow_at(flow);
        VertexSet out(n);
        for (VertexId v = 0; v < n; ++v) {
          out[v] = compare(to_int64(g.vertex_value(net_, v)), f->cmp(), *gamma);
        }
        return out;
      }
      case FormulaKind::kNot: return complement(eval(f->child(), flow));
      case FormulaKind::kAnd:
      case FormulaKind::kOr: {
        bool is_and = f->kind() == FormulaKind::kAnd;
        VertexSet out(n, is_and);
        for (const auto& c : f->children()) {
          VertexSet s = eval(c, flow);
          for (VertexId v = 0; v < n; ++v) out[v] = is_and ? (out[v] && s[v]) : (out[v] || s[v]);
        }
        return out;
      }
      case FormulaKind::kImplies: {
        VertexSet a = eval(f->child(0), flow);
        VertexSet b = eval(f->child(1), flow);
        VertexSet out(n);
        for (VertexId v = 0; v < n; ++v) out[v] = !a[v] || b[v];
        return out;
      }
      case FormulaKind::kPathQuant: return path_quant(f->path_quantifier(), f->child(), flow);
      case FormulaKind::kFlowQuant: {
        FlowQuantifier q = f->flow_quantifier();
        if (is_real(q)) {
          throw Error(ErrorCode::kPrecondition, "the oracle does not enumerate real flows");
        }
        bool universal = is_universal(q);
        VertexSet out(n, universal);
        const auto& all = flows();
        for (std::size_t i = 0; i < all.size(); ++i) {
          if (is_max(q) && to_int64(all[i].vertex_value(net_, net_.source())) != gamma_max()) {
            continue;
          }
          VertexSet s = eval(f->child(), static_cast<int>(i));
          for (VertexId v = 0; v < n; ++v) out[v] = universal ? (out[v] && s[v]) : (out[v] || s[v]);
        }
        return out;
      }
      case FormulaKind::kValueQuant: {
        if (!binds_free(f)) return eval(f->child(), flow);
        bool forall = f->value_quantifier() == ValueQuantifier::kForall;
        VertexSet out(n, forall);
        for (std::int64_t g = 0; g <= compute_cn(net_); ++g) {
          VertexSet s = eval(substitute_variable_unchecked(f->child(), f->name(), g), flow);
          for (VertexId v = 0; v < n; ++v) out[v] = forall ? (out[v] && s[v]) : (out[v] || s[v]);
        }
        return out;
      }
      case FormulaKind::kPlaceholder:
        throw Error(ErrorCode::kPrecondition, "placeholder '?' cannot be evaluated");
      default:
        throw Error(ErrorCode::kPrecondition, "temporal operator outside a path quantifier");
    }
  }

  static VertexSet complement(VertexSet s) {
    s.flip();
    return s;
  }

  std::size_t bound_for(const FormulaPtr& psi) const {
    if (budget_.path_bound) return *budget_.path_bound;
    const std::size_t n = net_.num_vertices();
    std::size_t full = n << std::min<std::size_t>(size(psi), 20);
    return std::min(full, n * (temporal_depth(psi) + 1));
  }

  // Calls visit(vertices, edges) for every target path from `start` with at
  // most `bound` edges; edges pass `allow`.
  template <typename Allow, typename Visit>
  void paths_from(VertexId start, std::size_t bound, Allow allow, Visit visit) {
    std::vector<VertexId> vs{start};
    std::vector<EdgeId> es;
    std::size_t count = 0;
    auto rec = [&](auto&& self) -> void {
      VertexId v = vs.back();
      if (net_.is_target(v)) {
        if (++count > budget_.paths) {
          throw Error(ErrorCode::kBudgetExceeded, "path enumeration exceeds budget");
        }
        visit(vs, es);
      }
      if (es.size() == bound) return;
      for (EdgeId e : net_.out_edges(v)) {
        if (!allow(es.size(), e)) continue;
        vs.push_back(net_.edge(e).to);
        es.push_back(e);
        self(self);
        vs.pop_back();
        es.pop_back();
      }
    };
    rec(rec);
  }

  bool on_path(const FormulaPtr& psi, const std::vector<VertexId>& path, std::size_t i, int flow,
               std::unordered_map<PathKey, bool, PathKeyHash>& memo) {
    if (!has_open_temporal(psi)) return eval(psi, flow)[path[i]];
    PathKey key{psi.get(), i};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = false;
    const std::size_t len = path.size();
    switch (psi->kind()) {
      case FormulaKind::kNot: r = !on_path(psi->child(), path, i, flow, memo); break;
      case FormulaKind::kAnd:
        r = true;
        for (const auto& c : psi->children()) r = r && on_path(c, path, i, flow, memo);
        break;
      case FormulaKind::kOr:
        for (const auto& c : psi->children()) r = r || on_path(c, path, i, flow, memo);
        break;
      case FormulaKind::kImplies:
        r = !on_path(psi->child(0), path, i, flow, memo) || on_path(psi->child(1), path, i, flow, memo);
        break;
      case FormulaKind::kNext: r = i + 1 < len && on_path(psi->child(), path, i + 1, flow, memo); break;
      case FormulaKind::kUntil:
        for (std::size_t j = i; j < len && !r; ++j) {
          if (on_path(psi->child(1), path, j, flow, memo)) {
            r = true;
            for (std::size_t k = i; k < j && r; ++k) r = on_path(psi->child(0), path, k, flow, memo);
          }
        }
        break;
      case FormulaKind::kFinally:
        for (std::size_t j = i; j < len && !r; ++j) r = on_path(psi->child(), path, j, flow, memo);
        break;
      case FormulaKind::kGlobally:
        r = true;
        for (std::size_t j = i; j < len && r; ++j) r = on_path(psi->child(), path, j, flow, memo);
        break;
      case FormulaKind::kYesterday: r = i > 0 && on_path(psi->child(), path, i - 1, flow, memo); break;
      case FormulaKind::kSince:
        for (std::size_t j = i; j-- > 0 && !r;) {
          if (on_path(psi->child(1), path, j, flow, memo)) {
            r = true;
            for (std::size_t k = j + 1; k <= i && r; ++k) r = on_path(psi->child(0), path, k, flow, memo);
          }
        }
        break;
      case FormulaKind::kFlowQuant: {
        // The path stays fixed while the flow varies.
        FlowQuantifier q = psi->flow_quantifier();
        if (is_real(q)) {
          throw Error(ErrorCode::kPrecondition, "the oracle does not enumerate real flows");
        }
        bool universal = is_universal(q);
        r = universal;
        const auto& all = flows();
        for (std::size_t j = 0; j < all.size() && r == universal; ++j) {
          if (is_max(q) && to_int64(all[j].vertex_value(net_, net_.source())) != gamma_max()) {
            continue;
          }
          std::unordered_map<PathKey, bool, PathKeyHash> inner;
          r = on_path(psi->child(), path, i, static_cast<int>(j), inner);
        }
        break;
      }
      case FormulaKind::kValueQuant: {
        bool forall = psi->value_quantifier() == ValueQuantifier::kForall;
        r = forall;
        for (std::int64_t g = 0; g <= compute_cn(net_) && r == forall; ++g) {
          keep_.push_back(substitute_variable_unchecked(psi->child(), psi->name(), g));
          std::unordered_map<PathKey, bool, PathKeyHash> inner;
          r = on_path(keep_.back(), path, i, flow, inner);
        }
        break;
      }
      default: throw Error(ErrorCode::kPrecondition, "cannot evaluate " + to_string(psi));
    }
    memo.emplace(key, r);
    return r;
  }

  VertexSet path_quant(PathQuantifier q, const FormulaPtr& psi, int flow) {
    const std::size_t n = net_.num_vertices();
    bool positive = is_positive(q);
    bool universal = is_universal(q);
    const FlowFunction* g = positive ? &flow_at(flow) : nullptr;
    std::size_t bound = bound_for(psi);
    VertexSet out(n, universal);

    if (!has_direct_past(psi)) {
      auto allow = [&](std::size_t, EdgeId e) { return !positive || (*g)[e] > 0; };
      for (VertexId v = 0; v < n; ++v) {
        bool result = universal;
        paths_from(v, bound, allow, [&](const std::vector<VertexId>& path, const std::vector<EdgeId>&) {
          if (result != universal) return;
          std::unordered_map<PathKey, bool, PathKeyHash> memo;
          bool sat = on_path(psi, path, 0, flow, memo);
          if (sat != universal) result = sat;
        });
        out[v] = result;
      }
      return out;
    }

    // Source-target paths, judged at every position; positivity is needed
    // from that position on.
    auto any = [](std::size_t, EdgeId) { return true; };
    paths_from(net_.source(), bound, any, [&](const std::vector<VertexId>& path,
                                              const std::vector<EdgeId>& edges) {
      std::unordered_map<PathKey, bool, PathKeyHash> memo;
      std::size_t first_positive = edges.size();
      if (positive) {
        while (first_positive > 0 && (*g)[edges[first_positive - 1]] > 0) --first_positive;
      } else {
        first_positive = 0;
      }
      for (std::size_t i = first_positive; i < path.size(); ++i) {
        bool sat = on_path(psi, path, i, flow, memo);
        if (universal && !sat) out[path[i]] = false;
        if (!universal && sat) out[path[i]] = true;
      }
    });
    return out;
  }

  const FlowNetwork& net_;
  OracleBudget budget_;
  std::optional<std::vector<FlowFunction>> flows_;
  std::optional<std::int64_t> gamma_max_;
  std::map<std::pair<const Formula*, int>, VertexSet> memo_;
  std::vector<FormulaPtr> keep_;
};

}  // namespace

VertexSet brute_check_set(const FlowNetwork& net, const FormulaPtr& phi,
                          const OracleBudget& budget) {
  std::string problem = closedness_problem(phi);
  if (!problem.empty()) throw Error(ErrorCode::kNotClosed, problem);
  Oracle oracle(net, budget);
  FormulaPtr f = phi;
  if (uses_gmax(f)) f = substitute_gmax(f, oracle.gamma_max());
  return oracle.eval(f, -1);
}

bool brute_check(const FlowNetwork& net, const FormulaPtr& phi, const OracleBudget& budget) {
  return brute_check_set(net, phi, budget)[net.source()];
}

VertexSet brute_path_quantifier(const FlowNetwork& net, const FlowFunction& flow,
                                PathQuantifier q, const FormulaPtr& psi,
                                const OracleBudget& budget) {
  Oracle oracle(net, budget);
  oracle.set_flows({flow});
  return oracle.eval(Formula::path(q, psi), 0);
}

std::vector<std::int64_t> enumerate_value_solutions(const FlowNetwork& net, const FormulaPtr& f,
                                                    const Decider& decide) {
  bool found = contains(f, [](const Formula& g) {
    return g.kind() == FormulaKind::kFlowProp && g.expr() && g.expr()->op == ValueOp::kPlaceholder;
  });
  if (!found) throw Error(ErrorCode::kNoPlaceholder, "no value placeholder in " + to_string(f));
  Decider d = decide ? decide : [](const FlowNetwork& n, const FormulaPtr& g) {
    return check(n, g).satisfied;
  };
  std::vector<std::int64_t> out;
  for (std::int64_t g = 0; g <= net.capacity_sum(); ++g) {
    if (d(net, substitute_value_placeholder(f, g))) out.push_back(g);
  }
  return out;
}

FlowNetwork unwind(const FlowNetwork& net, std::optional<std::size_t> depth) {
  const std::size_t n = net.num_vertices();
  if (!depth) {
    // Kahn's algorithm detects cycles.
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& e : net.edges()) ++indeg[e.to];
    std::vector<VertexId> stack;
    for (VertexId v = 0; v < n; ++v) {
      if (indeg[v] == 0) stack.push_back(v);
    }
    std::size_t seen = 0;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      ++seen;
      for (EdgeId e : net.out_edges(v)) {
        if (--indeg[net.edge(e).to] == 0) stack.push_back(net.edge(e).to);
      }
    }
    if (seen != n) throw Error(ErrorCode::kCyclicFullUnwind, "full unwinding of a cyclic network");
  }

  struct Node {
    std::string name;
    VertexId vertex;
    std::size_t parent;
    EdgeId via;
    std::size_t length;
    std::vector<std::size_t> children;
    bool keep = true;
  };
  std::vector<Node> nodes{{net.vertex_name(net.source()), net.source(), 0, 0, 0, {}, true}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (depth && nodes[i].length == *depth) continue;
    for (EdgeId e : net.out_edges(nodes[i].vertex)) {
      VertexId w = net.edge(e).to;
      nodes[i].children.push_back(nodes.size());
      nodes.push_back({nodes[i].name + "." + net.vertex_name(w), w, i, e, nodes[i].length + 1, {}, true});
    }
  }
  // Children come after parents, so one backward sweep prunes dead branches.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (net.is_target(nodes[i].vertex)) continue;
    bool alive = false;
    for (std::size_t c : nodes[i].children) alive = alive || nodes[c].keep;
    nodes[i].keep = alive;
  }
  if (!nodes[0].keep) throw Error(ErrorCode::kPrecondition, "no target within the unwinding depth");

  std::vector<VertexSpec> vertices;
  std::vector<std::string> targets;
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].keep) continue;
    vertices.push_back({nodes[i].name, net.labels(nodes[i].vertex)});
    if (net.is_target(nodes[i].vertex)) targets.push_back(nodes[i].name);
    if (i > 0) {
      edges.push_back({nodes[nodes[i].parent].name, nodes[i].name, net.edge(nodes[i].via).capacity});
    }
  }
  return FlowNetwork(net.ap(), std::move(vertices), nodes[0].name, targets, edges);
}

}  // namespace flowlogic
