#include "flowlogic/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "flowlogic/error.hpp"

namespace flowlogic {

VertexRange VertexRange::intersect(const VertexRange& other) const {
  VertexRange r;
  r.empty = empty || other.empty;
  if (lo > other.lo) {
    r.lo = lo;
    r.lo_strict = lo_strict;
  } else if (other.lo > lo) {
    r.lo = other.lo;
    r.lo_strict = other.lo_strict;
  } else {
    r.lo = lo;
    r.lo_strict = lo_strict || other.lo_strict;
  }
  if (!hi) {
    r.hi = other.hi;
    r.hi_strict = other.hi_strict;
  } else if (!other.hi) {
    r.hi = hi;
    r.hi_strict = hi_strict;
  } else if (*hi < *other.hi) {
    r.hi = hi;
    r.hi_strict = hi_strict;
  } else if (*other.hi < *hi) {
    r.hi = other.hi;
    r.hi_strict = other.hi_strict;
  } else {
    r.hi = hi;
    r.hi_strict = hi_strict || other.hi_strict;
  }
  if (r.hi && (r.lo > *r.hi || (r.lo == *r.hi && (r.lo_strict || r.hi_strict)))) {
    r.empty = true;
  }
  return r;
}

VertexRange VertexRange::integerized() const {
  VertexRange r = *this;
  if (r.lo_strict) {
    r.lo += 1;
    r.lo_strict = false;
  }
  if (r.hi && r.hi_strict) {
    *r.hi -= 1;
    r.hi_strict = false;
  }
  if (r.hi && (*r.hi < 0 || r.lo > *r.hi)) r.empty = true;
  return r;
}

bool VertexRange::contains(const Rational& value) const {
  if (empty) return false;
  if (lo_strict ? !(value > lo) : !(value >= lo)) return false;
  if (hi && (hi_strict ? !(value < *hi) : !(value <= *hi))) return false;
  return true;
}

std::string VertexRange::to_string() const {
  if (empty) return "empty";
  std::string out = lo_strict ? "(" : "[";
  out += std::to_string(lo) + ",";
  out += hi ? std::to_string(*hi) : "inf";
  out += hi && !hi_strict ? "]" : ")";
  return out;
}

EdgeId BoundedEdgeGraph::add_edge(VertexId from, VertexId to,
                                  std::int64_t lower, std::int64_t upper) {
  if (lower < 0 || lower > upper) {
    throw Error(ErrorCode::kPrecondition,
                "edge bounds [" + std::to_string(lower) + "," +
                    std::to_string(upper) + "] are not 0 <= lower <= upper");
  }
  if (from >= num_vertices_ || to >= num_vertices_) {
    throw Error(ErrorCode::kPrecondition, "edge endpoint out of range");
  }
  edges_.push_back({from, to, lower, upper});
  return edges_.size() - 1;
}

namespace {

// Dinic's blocking-flow algorithm on an explicit residual graph. Arc 2i is
// the forward arc of edge i and 2i+1 its reverse.
class Dinic {
 public:
  explicit Dinic(std::size_t n) : adjacency_(n), level_(n), next_(n) {}

  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    std::size_t id = arcs_.size() / 2;
    adjacency_[from].push_back(arcs_.size());
    arcs_.push_back({to, cap});
    adjacency_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0});
    original_.push_back(cap);
    return id;
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (build_levels(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (std::int64_t pushed = augment(s, t, kInfinity)) total += pushed;
    }
    return total;
  }

  std::int64_t flow(std::size_t edge) const {
    return original_[edge] - arcs_[2 * edge].residual;
  }

 private:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

  struct Arc {
    std::size_t to;
    std::int64_t residual;
  };

  bool build_levels(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t a : adjacency_[u]) {
        if (arcs_[a].residual > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t augment(std::size_t u, std::size_t t, std::int64_t limit) {
    if (u == t) return limit;
    for (std::size_t& i = next_[u]; i < adjacency_[u].size(); ++i) {
      std::size_t a = adjacency_[u][i];
      Arc& arc = arcs_[a];
      if (arc.residual <= 0 || level_[arc.to] != level_[u] + 1) continue;
      std::int64_t pushed = augment(arc.to, t, std::min(limit, arc.residual));
      if (pushed > 0) {
        arc.residual -= pushed;
        arcs_[a ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::int64_t> original_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  const std::size_t sink = net.num_vertices();
  Dinic dinic(net.num_vertices() + 1);
  for (const auto& e : net.edges()) {
    dinic.add_edge(e.from, e.to, std::max<std::int64_t>(e.capacity, 0));
  }
  const std::int64_t unbounded = net.capacity_sum();
  for (VertexId t : net.targets()) dinic.add_edge(t, sink, unbounded);
  MaxFlowResult result;
  result.value = dinic.run(net.source(), sink);
  std::vector<std::int64_t> values(net.num_edges());
  for (EdgeId e = 0; e < net.num_edges(); ++e) values[e] = dinic.flow(e);
  result.witness = FlowFunction::integral(std::move(values));
  return result;
}

std::optional<std::vector<std::int64_t>> feasible_flow_lower_bounds(
    const BoundedEdgeGraph& graph, VertexId source,
    std::span<const VertexId> targets) {
  const std::size_t n = graph.num_vertices();
  const std::size_t super_source = n;
  const std::size_t super_sink = n + 1;
  Dinic dinic(n + 2);

  std::int64_t upper_total = 0;
  std::vector<std::int64_t> excess(n, 0);
  for (const auto& e : graph.edges()) {
    dinic.add_edge(e.from, e.to, e.upper - e.lower);
    excess[e.to] += e.lower;
    excess[e.from] -= e.lower;
    upper_total += e.upper;
  }
  for (VertexId t : targets) {
    if (t != source) dinic.add_edge(t, source, upper_total);
  }
  std::int64_t demand = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (excess[v] > 0) {
      dinic.add_edge(super_source, v, excess[v]);
      demand += excess[v];
    } else if (excess[v] < 0) {
      dinic.add_edge(v, super_sink, -excess[v]);
    }
  }
  if (dinic.run(super_source, super_sink) != demand) return std::nullopt;
  std::vector<std::int64_t> flow(graph.edges().size());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    flow[i] = graph.edges()[i].lower + dinic.flow(i);
  }
  return flow;
}

ConstrainedFlowResult vertex_constrained_flow(
    const FlowNetwork& net, const std::vector<VertexRange>& ranges) {
  if (ranges.size() != net.num_vertices()) {
    throw Error(ErrorCode::kPrecondition, "one range per vertex is required");
  }
  for (const auto& r : ranges) {
    if (r.has_strict_end()) {
      throw Error(ErrorCode::kPrecondition,
                  "vertex ranges must be integerized before solving");
    }
    if (r.empty || (r.hi && *r.hi < r.lo)) {
      return {ConstrainedFlowStatus::kEmptyRange, std::nullopt};
    }
  }
  const std::int64_t unbounded = net.capacity_sum();
  const std::size_t n = net.num_vertices();
  BoundedEdgeGraph graph(2 * n);
  for (const auto& e : net.edges()) {
    graph.add_edge(2 * e.from + 1, 2 * e.to, 0, std::max<std::int64_t>(e.capacity, 0));
  }
  for (VertexId v = 0; v < n; ++v) {
    std::int64_t hi = ranges[v].hi ? std::min(*ranges[v].hi, unbounded) : unbounded;
    if (ranges[v].lo > hi) return {ConstrainedFlowStatus::kInfeasible, std::nullopt};
    graph.add_edge(2 * v, 2 * v + 1, ranges[v].lo, hi);
  }
  std::vector<VertexId> targets;
  for (VertexId t : net.targets()) targets.push_back(2 * t + 1);
  auto solved = feasible_flow_lower_bounds(graph, 2 * net.source(), targets);
  if (!solved) return {ConstrainedFlowStatus::kInfeasible, std::nullopt};
  std::vector<std::int64_t> values(solved->begin(),
                                   solved->begin() + static_cast<std::ptrdiff_t>(net.num_edges()));
  return {ConstrainedFlowStatus::kFeasible, FlowFunction::integral(std::move(values))};
}

}  // namespace flowlogic
