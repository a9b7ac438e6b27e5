#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowlogic/flow.hpp"
#include "flowlogic/network.hpp"

namespace flowlogic {

// Interval constraint on the flow through one vertex. Bounds are integers;
// strict ends are kept until integerization.
struct VertexRange {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;  // nullopt means unbounded
  bool lo_strict = false;
  bool hi_strict = false;
  bool empty = false;

  static VertexRange unbounded() { return {}; }
  static VertexRange closed(std::int64_t lo, std::int64_t hi) {
    return {lo, hi, false, false, lo > hi};
  }
  static VertexRange point(std::int64_t value) { return closed(value, value); }

  // Intersection, keeping strictness; marks the result empty when no real
  // number satisfies both.
  VertexRange intersect(const VertexRange& other) const;

  // Converts >g to >=g+1 and <g to <=g-1. (6,7) becomes empty.
  VertexRange integerized() const;

  bool has_strict_end() const { return lo_strict || hi_strict; }
  bool is_unconstrained() const {
    return !empty && lo == 0 && !lo_strict && !hi.has_value();
  }
  bool contains(const Rational& value) const;

  std::string to_string() const;

  friend bool operator==(const VertexRange&, const VertexRange&) = default;
};

// Directed graph with per-edge [lower, upper] integer bounds.
class BoundedEdgeGraph {
 public:
  struct BoundedEdge {
    VertexId from;
    VertexId to;
    std::int64_t lower;
    std::int64_t upper;
  };

  explicit BoundedEdgeGraph(std::size_t num_vertices) : num_vertices_(num_vertices) {}

  // Throws Error(kPrecondition) when lower > upper or lower < 0.
  EdgeId add_edge(VertexId from, VertexId to, std::int64_t lower,
                  std::int64_t upper);

  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<BoundedEdge>& edges() const { return edges_; }

 private:
  std::size_t num_vertices_;
  std::vector<BoundedEdge> edges_;
};

struct MaxFlowResult {
  std::int64_t value = 0;
  FlowFunction witness;
};

// Integral maximum flow from the source to the target set (Dinic).
MaxFlowResult max_flow(const FlowNetwork& net);

// A flow from `source` to `targets` that conserves at every other vertex
// and respects every edge's bounds, or nullopt when none exists. Returned
// values are edge-indexed and integral.
std::optional<std::vector<std::int64_t>> feasible_flow_lower_bounds(
    const BoundedEdgeGraph& graph, VertexId source,
    std::span<const VertexId> targets);

enum class ConstrainedFlowStatus { kFeasible, kInfeasible, kEmptyRange };

struct ConstrainedFlowResult {
  ConstrainedFlowStatus status = ConstrainedFlowStatus::kInfeasible;
  std::optional<FlowFunction> flow;

  bool feasible() const { return status == ConstrainedFlowStatus::kFeasible; }
};

// Integral flow with ranges[v].lo <= f(v) <= ranges[v].hi for every vertex,
// via vertex splitting. `ranges` is indexed by VertexId and must already be
// integerized (no strict ends); Error(kPrecondition) otherwise.
ConstrainedFlowResult vertex_constrained_flow(
    const FlowNetwork& net, const std::vector<VertexRange>& ranges);

}  // namespace flowlogic
