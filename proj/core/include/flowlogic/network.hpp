#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flowlogic {

using VertexId = std::size_t;
using EdgeId = std::size_t;

// Indexed by VertexId.
using VertexSet = std::vector<bool>;

struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  std::int64_t capacity = 0;
};

struct VertexSpec {
  std::string id;
  std::vector<std::string> labels;
};

struct EdgeSpec {
  std::string from;
  std::string to;
  std::int64_t capacity = 0;
};

// A labeled, capacitated network with one source and a set of targets.
//
// Construction only resolves names into indices; it throws
// Error(kInvalidNetwork) for duplicate or unknown vertex ids. Structural
// conditions (no edge into the source, every vertex reaches a target, ...)
// are checked by validate(), so an ill-formed network can still be built and
// inspected. Immutable after construction.
class FlowNetwork {
 public:
  FlowNetwork(std::vector<std::string> ap, std::vector<VertexSpec> vertices,
              const std::string& source,
              const std::vector<std::string>& targets,
              const std::vector<EdgeSpec>& edges);

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<std::string>& ap() const { return ap_; }
  const std::string& vertex_name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find_vertex(std::string_view name) const;

  VertexId source() const { return source_; }
  const std::vector<VertexId>& targets() const { return targets_; }
  bool is_target(VertexId v) const { return is_target_[v]; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }

  const std::vector<std::string>& labels(VertexId v) const {
    return labels_[v];
  }
  bool has_label(VertexId v, std::string_view prop) const;

  // Sum of all capacities; an upper bound on the flow through any vertex.
  std::int64_t capacity_sum() const;

  VertexSpec vertex_spec(VertexId v) const;
  std::vector<EdgeSpec> edge_specs() const;

 private:
  std::vector<std::string> ap_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> labels_;
  std::unordered_map<std::string, VertexId> index_;
  VertexId source_ = 0;
  std::vector<VertexId> targets_;
  std::vector<bool> is_target_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

// Every violated structural invariant, one human-readable line each. Empty
// iff the network is a legal flow network.
std::vector<std::string> validate(const FlowNetwork& net);

// Parses the network JSON format and validates it. Throws SyntaxError for
// malformed JSON or schema violations and Error(kInvalidNetwork) naming the
// violated invariant otherwise.
FlowNetwork parse_network(std::string_view text);
// Parses without validating; construction errors still throw.
FlowNetwork parse_network_unchecked(std::string_view text);
std::string serialize_network(const FlowNetwork& net);

FlowNetwork load_network_file(const std::string& path);

struct ReachabilityLayers {
  VertexSet exactly_k;
  VertexSet at_least_k;
  bool short_target_path_exists = false;
};

// exactly_k: vertices at the end of some length-k path from v.
// at_least_k: vertices at the end of some path of length >= k from v.
// short_target_path_exists: some target v-path has length < k.
ReachabilityLayers reachability_layers(const FlowNetwork& net, VertexId v,
                                       std::size_t k);

// layers[j] = vertices reachable from v by a path of length exactly j, for
// j = 0..k.
std::vector<VertexSet> successor_layers(const FlowNetwork& net, VertexId v,
                                        std::size_t k);

VertexSet forward_closure(const FlowNetwork& net, const VertexSet& from);

// Network with a fresh vertex in the middle of every edge.
struct RefinedNetwork {
  FlowNetwork network;
  std::string edge_prop;
  // middle_vertex[e] is the vertex inserted on original edge e. Original
  // vertices keep their ids; original edge e becomes edges 2e and 2e+1.
  std::vector<VertexId> middle_vertex;
};

RefinedNetwork refine_for_positive_paths(const FlowNetwork& net);

}  // namespace flowlogic
