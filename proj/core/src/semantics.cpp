#include "flowlogic/semantics.hpp"

#include <deque>
#include <map>
#include <memory>

#include "flowlogic/error.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "progression.hpp"

namespace flowlogic {

using detail::Progression;

Valuation flow_valuation(const FlowNetwork& net, const FlowFunction& flow) {
  auto values = std::make_shared<std::vector<Rational>>(flow.vertex_values(net));
  auto edges = std::make_shared<std::vector<Rational>>(flow.values());
  Valuation val;
  val.flow_prop = [values](VertexId v, CmpOp op, std::int64_t gamma) {
    const Rational& x = (*values)[v];
    Rational g = make_rational(gamma);
    switch (op) {
      case CmpOp::kGt: return x > g;
      case CmpOp::kGe: return x >= g;
      case CmpOp::kLt: return x < g;
      case CmpOp::kLe: return x <= g;
      case CmpOp::kEq: return x == g;
    }
    return false;
  };
  val.positive_edge = [edges](EdgeId e) { return (*edges)[e] > 0; };
  return val;
}

namespace {

constexpr std::uint32_t kPastBase = 1u << 24;
constexpr std::size_t kMaxPastNodes = 64;

using TriFlow = std::function<std::optional<bool>(VertexId, CmpOp, std::int64_t)>;

VertexSet complement(VertexSet s) {
  s.flip();
  return s;
}

struct Bounds {
  VertexSet must;
  VertexSet may;
};

Bounds exact(VertexSet s) { return {s, s}; }

class Evaluator {
 public:
  Evaluator(const FlowNetwork& net, TriFlow flow_prop, std::function<bool(EdgeId)> positive_edge,
            const std::unordered_map<std::string, VertexSet>& labels)
      : net_(net),
        flow_prop_(std::move(flow_prop)),
        positive_edge_(std::move(positive_edge)),
        labels_(labels) {}

  Bounds state(const FormulaPtr& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
    Bounds out = compute(f);
    memo_.emplace(f.get(), out);
    keep_.push_back(f);
    return out;
  }

  Bounds path_quant(PathQuantifier q, const FormulaPtr& psi, bool with_past);

  const FlowNetwork& net() const { return net_; }
  const std::function<bool(EdgeId)>& positive_edge() const { return positive_edge_; }

 private:
  Bounds compute(const FormulaPtr& f);

  const FlowNetwork& net_;
  TriFlow flow_prop_;
  std::function<bool(EdgeId)> positive_edge_;
  const std::unordered_map<std::string, VertexSet>& labels_;
  std::unordered_map<const Formula*, Bounds> memo_;
  std::vector<FormulaPtr> keep_;
};

Bounds Evaluator::compute(const FormulaPtr& f) {
  const std::size_t n = net_.num_vertices();
  switch (f->kind()) {
    case FormulaKind::kTrue: return exact(VertexSet(n, true));
    case FormulaKind::kFalse: return exact(VertexSet(n, false));
    case FormulaKind::kAtom: {
      auto it = labels_.find(f->name());
      if (it != labels_.end()) return exact(it->second);
      VertexSet out(n);
      for (VertexId v = 0; v < n; ++v) out[v] = net_.has_label(v, f->name());
      return exact(std::move(out));
    }
    case FormulaKind::kFlowProp: {
      auto gamma = evaluate(f->expr());
      if (!gamma) {
        throw Error(ErrorCode::kPrecondition,
                    "flow proposition '" + to_string(f) + "' has a non-constant bound");
      }
      if (!flow_prop_) {
        throw Error(ErrorCode::kPrecondition,
                    "flow proposition '" + to_string(f) + "' needs a flow to evaluate");
      }
      Bounds out{VertexSet(n, false), VertexSet(n, false)};
      for (VertexId v = 0; v < n; ++v) {
        std::optional<bool> t = flow_prop_(v, f->cmp(), *gamma);
        out.must[v] = t.has_value() && *t;
        out.may[v] = !t.has_value() || *t;
      }
      return out;
    }
    case FormulaKind::kNot: {
      Bounds c = state(f->child());
      return {complement(c.may), complement(c.must)};
    }
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      bool is_and = f->kind() == FormulaKind::kAnd;
      Bounds out{VertexSet(n, is_and), VertexSet(n, is_and)};
      for (const auto& c : f->children()) {
        Bounds s = state(c);
        for (VertexId v = 0; v < n; ++v) {
          out.must[v] = is_and ? (out.must[v] && s.must[v]) : (out.must[v] || s.must[v]);
          out.may[v] = is_and ? (out.may[v] && s.may[v]) : (out.may[v] || s.may[v]);
        }
      }
      return out;
    }
    case FormulaKind::kImplies: {
      Bounds a = state(f->child(0));
      Bounds b = state(f->child(1));
      Bounds out{VertexSet(n), VertexSet(n)};
      for (VertexId v = 0; v < n; ++v) {
        out.must[v] = !a.may[v] || b.must[v];
        out.may[v] = !a.must[v] || b.may[v];
      }
      return out;
    }
    case FormulaKind::kPathQuant:
      return path_quant(f->path_quantifier(), f->child(), has_direct_past(f->child()));
    case FormulaKind::kFlowQuant:
    case FormulaKind::kValueQuant:
      throw Error(ErrorCode::kPrecondition,
                  "quantifier '" + to_string(f) + "' must be resolved before fixed-flow evaluation");
    case FormulaKind::kPlaceholder:
      throw Error(ErrorCode::kPrecondition, "placeholder '?' cannot be evaluated");
    default:
      throw Error(ErrorCode::kPrecondition,
                  "temporal operator outside a path quantifier: " + to_string(f));
  }
}

// A path formula compiled into a progression root with its state atoms and
// past closure.
class CompiledPath {
 public:
  CompiledPath(Evaluator& ev, const FormulaPtr& psi, bool negated) : ev_(ev) {
    root_ = nnf(psi, negated);
  }

  Progression& prog() { return prog_; }
  Progression::Node root() const { return root_; }
  bool has_past() const { return !past_.empty(); }

  bool atoms_decided() const {
    for (const auto& a : atoms_) {
      if (a.must != a.may) return false;
    }
    return true;
  }

  // Literal truth; `optimistic` resolves undecided atoms in favour of the
  // literal, otherwise against it.
  bool truth(std::uint32_t atom, bool positive, VertexId v, std::uint64_t tracker,
             bool optimistic) const {
    if (atom >= kPastBase) return (((tracker >> (atom - kPastBase)) & 1u) != 0) == positive;
    const Bounds& b = atoms_[atom];
    if (optimistic) return positive ? b.may[v] : !b.must[v];
    return positive ? b.must[v] : !b.may[v];
  }

  // Tracker at the next position w, given tracker at v.
  std::uint64_t advance(std::uint64_t tracker, VertexId v, VertexId w) const {
    std::uint64_t next = 0;
    for (std::size_t p = 0; p < past_.size(); ++p) {
      const PastNode& node = past_[p];
      bool bit;
      if (!node.is_since) {
        bit = operand(node.rhs, v, tracker);
      } else {
        bool earlier = operand(node.rhs, v, tracker) || ((tracker >> p) & 1u);
        bit = earlier && operand(node.lhs, w, next);
      }
      if (bit) next |= std::uint64_t{1} << p;
    }
    return next;
  }

 private:
  struct PastNode {
    bool is_since;
    FormulaPtr lhs;
    FormulaPtr rhs;
    const Formula* source;
  };

  std::uint32_t atom_index(const FormulaPtr& f) {
    for (std::size_t i = 0; i < atom_formulas_.size(); ++i) {
      if (equal(atom_formulas_[i], f)) return static_cast<std::uint32_t>(i);
    }
    atom_formulas_.push_back(f);
    atoms_.push_back(ev_.state(f));
    return static_cast<std::uint32_t>(atoms_.size() - 1);
  }

  void check_past_operand(const FormulaPtr& f) {
    if (!has_open_temporal(f)) {
      atom_index(f);
      return;
    }
    switch (f->kind()) {
      case FormulaKind::kNot:
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
        for (const auto& c : f->children()) check_past_operand(c);
        return;
      case FormulaKind::kYesterday:
      case FormulaKind::kSince:
        past_index(f);
        return;
      default:
        throw Error(ErrorCode::kUnsupportedNesting,
                    "future operator inside a past operator: " + to_string(f));
    }
  }

  std::uint32_t past_index(const FormulaPtr& f) {
    for (std::size_t i = 0; i < past_.size(); ++i) {
      if (past_[i].source == f.get()) return static_cast<std::uint32_t>(i);
    }
    for (const auto& c : f->children()) check_past_operand(c);
    if (past_.size() >= kMaxPastNodes) {
      throw Error(ErrorCode::kUnsupportedNesting, "too many past operators");
    }
    bool since = f->kind() == FormulaKind::kSince;
    past_.push_back({since, since ? f->child(0) : nullptr, since ? f->child(1) : f->child(0),
                     f.get()});
    keep_.push_back(f);
    return static_cast<std::uint32_t>(past_.size() - 1);
  }

  bool operand(const FormulaPtr& f, VertexId v, std::uint64_t tracker) const {
    switch (f->kind()) {
      case FormulaKind::kNot: return !operand(f->child(), v, tracker);
      case FormulaKind::kAnd:
        for (const auto& c : f->children()) {
          if (!operand(c, v, tracker)) return false;
        }
        return true;
      case FormulaKind::kOr:
        for (const auto& c : f->children()) {
          if (operand(c, v, tracker)) return true;
        }
        return false;
      case FormulaKind::kImplies:
        return !operand(f->child(0), v, tracker) || operand(f->child(1), v, tracker);
      case FormulaKind::kYesterday:
      case FormulaKind::kSince:
        for (std::size_t i = 0; i < past_.size(); ++i) {
          if (past_[i].source == f.get()) return (tracker >> i) & 1u;
        }
        return false;
      default:
        for (std::size_t i = 0; i < atom_formulas_.size(); ++i) {
          if (equal(atom_formulas_[i], f)) return atoms_[i].must[v];
        }
        return false;
    }
  }

  Progression::Node nnf(const FormulaPtr& f, bool neg) {
    if (!has_open_temporal(f)) return prog_.literal(atom_index(f), !neg);
    switch (f->kind()) {
      case FormulaKind::kNot: return nnf(f->child(), !neg);
      case FormulaKind::kAnd:
      case FormulaKind::kOr: {
        std::vector<Progression::Node> kids;
        for (const auto& c : f->children()) kids.push_back(nnf(c, neg));
        bool conj = (f->kind() == FormulaKind::kAnd) != neg;
        return conj ? prog_.conj(std::move(kids)) : prog_.disj(std::move(kids));
      }
      case FormulaKind::kImplies: {
        auto a = nnf(f->child(0), !neg);
        auto b = nnf(f->child(1), neg);
        return neg ? prog_.conj({a, b}) : prog_.disj({a, b});
      }
      case FormulaKind::kNext: {
        auto a = nnf(f->child(), neg);
        return neg ? prog_.weak_next(a) : prog_.next(a);
      }
      case FormulaKind::kUntil: {
        auto a = nnf(f->child(0), neg);
        auto b = nnf(f->child(1), neg);
        return neg ? prog_.release(a, b) : prog_.until(a, b);
      }
      case FormulaKind::kFinally: {
        auto a = nnf(f->child(), neg);
        return neg ? prog_.release(prog_.bottom(), a) : prog_.until(prog_.top(), a);
      }
      case FormulaKind::kGlobally: {
        auto a = nnf(f->child(), neg);
        return neg ? prog_.until(prog_.top(), a) : prog_.release(prog_.bottom(), a);
      }
      case FormulaKind::kYesterday:
      case FormulaKind::kSince:
        return prog_.literal(kPastBase + past_index(f), !neg);
      case FormulaKind::kFlowQuant:
      case FormulaKind::kValueQuant:
        throw Error(ErrorCode::kUnsupportedNesting,
                    "quantifier over a path formula: " + to_string(f));
      default:
        throw Error(ErrorCode::kPrecondition, "cannot evaluate " + to_string(f));
    }
  }

  Evaluator& ev_;
  Progression prog_;
  Progression::Node root_ = 0;
  std::vector<FormulaPtr> atom_formulas_;
  std::vector<Bounds> atoms_;
  std::vector<PastNode> past_;
  std::vector<FormulaPtr> keep_;
};

struct SearchState {
  VertexId v;
  std::uint64_t tracker;
  Progression::Node r;
  bool operator==(const SearchState&) const = default;
};

struct SearchStateHash {
  std::size_t operator()(const SearchState& s) const {
    std::size_t h = std::hash<std::size_t>{}(s.v);
    h ^= std::hash<std::uint64_t>{}(s.tracker) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint32_t>{}(s.r) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Existential search over (vertex, tracker, residual): returns, for each
// start state, whether some continuation to a target satisfies it.
std::vector<bool> existential_search(const Evaluator& ev, CompiledPath& cp, bool positive_only,
                                     bool optimistic, const std::vector<SearchState>& starts) {
  const FlowNetwork& net = ev.net();
  std::vector<SearchState> states;
  std::unordered_map<SearchState, std::size_t, SearchStateHash> index;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<bool> accepting;
  std::map<std::pair<VertexId, std::uint64_t>, std::unordered_map<Progression::Node, Progression::Node>>
      caches;
  std::deque<std::size_t> queue;

  auto add = [&](const SearchState& s) {
    auto [it, inserted] = index.emplace(s, states.size());
    if (inserted) {
      states.push_back(s);
      preds.emplace_back();
      accepting.push_back(false);
      queue.push_back(it->second);
    }
    return it->second;
  };
  std::vector<std::size_t> start_ids;
  for (const auto& s : starts) start_ids.push_back(add(s));

  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    SearchState s = states[id];
    if (s.r == cp.prog().bottom()) continue;
    Progression::Truth truth = [&](std::uint32_t atom, bool positive) {
      return cp.truth(atom, positive, s.v, s.tracker, optimistic);
    };
    if (net.is_target(s.v) && cp.prog().final_value(s.r, truth)) accepting[id] = true;
    auto next = cp.prog().progress(s.r, truth, caches[{s.v, s.tracker}]);
    if (next == cp.prog().bottom()) continue;
    for (EdgeId e : net.out_edges(s.v)) {
      if (positive_only && !ev.positive_edge()(e)) continue;
      VertexId w = net.edge(e).to;
      std::uint64_t tracker = cp.has_past() ? cp.advance(s.tracker, s.v, w) : 0;
      std::size_t to = add({w, tracker, next});
      preds[to].push_back(id);
    }
  }

  std::vector<bool> good(states.size(), false);
  std::deque<std::size_t> back;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (accepting[i]) {
      good[i] = true;
      back.push_back(i);
    }
  }
  while (!back.empty()) {
    std::size_t id = back.front();
    back.pop_front();
    for (std::size_t p : preds[id]) {
      if (!good[p]) {
        good[p] = true;
        back.push_back(p);
      }
    }
  }
  std::vector<bool> out;
  for (std::size_t id : start_ids) out.push_back(good[id]);
  return out;
}

Bounds Evaluator::path_quant(PathQuantifier q, const FormulaPtr& psi, bool with_past) {
  const std::size_t n = net_.num_vertices();
  bool positive_only = is_positive(q);
  if (positive_only && !positive_edge_) {
    throw Error(ErrorCode::kPrecondition, "positive path quantifier needs a flow to evaluate");
  }
  bool universal = is_universal(q);
  CompiledPath cp(*this, psi, universal);
  if (with_past && !cp.atoms_decided()) {
    return {VertexSet(n, false), VertexSet(n, true)};
  }

  std::vector<SearchState> starts;
  std::vector<VertexId> start_vertex;
  if (!with_past) {
    for (VertexId v = 0; v < n; ++v) {
      starts.push_back({v, 0, cp.root()});
      start_vertex.push_back(v);
    }
  } else {
    // Trackers reachable at each vertex along prefixes from the source.
    std::map<std::pair<VertexId, std::uint64_t>, bool> seen;
    std::deque<std::pair<VertexId, std::uint64_t>> queue{{net_.source(), 0}};
    seen[{net_.source(), 0}] = true;
    while (!queue.empty()) {
      auto [v, tracker] = queue.front();
      queue.pop_front();
      starts.push_back({v, tracker, cp.root()});
      start_vertex.push_back(v);
      for (EdgeId e : net_.out_edges(v)) {
        VertexId w = net_.edge(e).to;
        std::pair<VertexId, std::uint64_t> next{w, cp.advance(tracker, v, w)};
        if (!seen[next]) {
          seen[next] = true;
          queue.push_back(next);
        }
      }
    }
  }

  auto collect = [&](bool optimistic) {
    VertexSet exists(n, false);
    auto good = existential_search(*this, cp, positive_only, optimistic, starts);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (good[i]) exists[start_vertex[i]] = true;
    }
    return exists;
  };
  VertexSet lower = collect(false);
  VertexSet upper = cp.atoms_decided() ? lower : collect(true);
  if (!universal) return {lower, upper};
  return {complement(upper), complement(lower)};
}

TriFlow lift(const Valuation& valuation) {
  if (!valuation.flow_prop) return {};
  return [&valuation](VertexId v, CmpOp op, std::int64_t gamma) -> std::optional<bool> {
    return valuation.flow_prop(v, op, gamma);
  };
}

}  // namespace

VertexSet eval_state_set(const FlowNetwork& net, const Valuation& valuation,
                         const FormulaPtr& phi) {
  Evaluator ev(net, lift(valuation), valuation.positive_edge, valuation.extra_labels);
  return ev.state(phi).must;
}

VertexSet eval_state_set(const FlowNetwork& net, const FlowFunction& flow,
                         const FormulaPtr& phi) {
  return eval_state_set(net, flow_valuation(net, flow), phi);
}

StateBounds eval_state_bounds(const FlowNetwork& net, const PartialValuation& valuation,
                              const FormulaPtr& phi) {
  Evaluator ev(net, valuation.flow_prop, {}, valuation.extra_labels);
  Bounds b = ev.state(phi);
  return {std::move(b.must), std::move(b.may)};
}

VertexSet eval_path_quantifier(const FlowNetwork& net, const Valuation& valuation,
                               PathQuantifier q, const FormulaPtr& psi) {
  if (has_direct_past(psi)) {
    throw Error(ErrorCode::kPrecondition, "path formula has past operators; use eval_with_past");
  }
  Evaluator ev(net, lift(valuation), valuation.positive_edge, valuation.extra_labels);
  return ev.path_quant(q, psi, false).must;
}

VertexSet eval_with_past(const FlowNetwork& net, const Valuation& valuation,
                         PathQuantifier q, const FormulaPtr& psi) {
  Evaluator ev(net, lift(valuation), valuation.positive_edge, valuation.extra_labels);
  return ev.path_quant(q, psi, true).must;
}

}  // namespace flowlogic
