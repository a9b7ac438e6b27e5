#include "flowlogic/network.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "flowlogic/error.hpp"
#include "json.hpp"

namespace flowlogic {

using json = nlohmann::json;

FlowNetwork::FlowNetwork(std::vector<std::string> ap,
                         std::vector<VertexSpec> vertices,
                         const std::string& source,
                         const std::vector<std::string>& targets,
                         const std::vector<EdgeSpec>& edges)
    : ap_(std::move(ap)) {
  names_.reserve(vertices.size());
  labels_.reserve(vertices.size());
  for (auto& spec : vertices) {
    if (!index_.emplace(spec.id, names_.size()).second) {
      throw Error(ErrorCode::kInvalidNetwork,
                  "duplicate vertex id '" + spec.id + "'");
    }
    names_.push_back(spec.id);
    std::sort(spec.labels.begin(), spec.labels.end());
    spec.labels.erase(std::unique(spec.labels.begin(), spec.labels.end()),
                      spec.labels.end());
    labels_.push_back(std::move(spec.labels));
  }
  auto resolve = [this](const std::string& name, const char* role) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw Error(ErrorCode::kInvalidNetwork,
                  std::string(role) + " refers to unknown vertex '" + name +
                      "'");
    }
    return it->second;
  };
  source_ = resolve(source, "source");
  is_target_.assign(names_.size(), false);
  for (const auto& t : targets) {
    VertexId id = resolve(t, "target");
    if (!is_target_[id]) {
      is_target_[id] = true;
      targets_.push_back(id);
    }
  }
  std::sort(targets_.begin(), targets_.end());
  out_.resize(names_.size());
  in_.resize(names_.size());
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    Edge edge{resolve(e.from, "edge"), resolve(e.to, "edge"), e.capacity};
    out_[edge.from].push_back(edges_.size());
    in_[edge.to].push_back(edges_.size());
    edges_.push_back(edge);
  }
}

std::optional<VertexId> FlowNetwork::find_vertex(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FlowNetwork::has_label(VertexId v, std::string_view prop) const {
  const auto& l = labels_[v];
  return std::binary_search(l.begin(), l.end(), prop);
}

std::int64_t FlowNetwork::capacity_sum() const {
  std::int64_t total = 0;
  for (const auto& e : edges_) total += std::max<std::int64_t>(e.capacity, 0);
  return total;
}

VertexSpec FlowNetwork::vertex_spec(VertexId v) const {
  return VertexSpec{names_[v], labels_[v]};
}

std::vector<EdgeSpec> FlowNetwork::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) {
    out.push_back(EdgeSpec{names_[e.from], names_[e.to], e.capacity});
  }
  return out;
}

namespace {

std::string edge_text(const FlowNetwork& net, const Edge& e) {
  return "(" + net.vertex_name(e.from) + "," + net.vertex_name(e.to) + ")";
}

VertexSet reach_forward(const FlowNetwork& net, VertexId from) {
  VertexSet seen(net.num_vertices(), false);
  std::deque<VertexId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : net.out_edges(v)) {
      VertexId w = net.edge(e).to;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

VertexSet reach_backward(const FlowNetwork& net,
                         const std::vector<VertexId>& from) {
  VertexSet seen(net.num_vertices(), false);
  std::deque<VertexId> queue(from.begin(), from.end());
  for (VertexId v : from) seen[v] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : net.in_edges(v)) {
      VertexId u = net.edge(e).from;
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<std::string> validate(const FlowNetwork& net) {
  std::vector<std::string> out;
  std::set<std::string> ap(net.ap().begin(), net.ap().end());
  if (ap.size() != net.ap().size()) out.push_back("duplicate proposition in ap");
  if (net.targets().empty()) out.push_back("no targets");
  if (net.is_target(net.source())) out.push_back("source is a target");
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    for (const auto& l : net.labels(v)) {
      if (!ap.count(l)) {
        out.push_back("label " + l + " on " + net.vertex_name(v) +
                      " is not in ap");
      }
    }
  }
  std::set<std::pair<VertexId, VertexId>> seen_edges;
  for (const auto& e : net.edges()) {
    if (e.capacity < 0) out.push_back("negative capacity on " + edge_text(net, e));
    if (e.to == net.source()) out.push_back("edge enters the source " + edge_text(net, e));
    if (net.is_target(e.from)) out.push_back("edge leaves a target " + edge_text(net, e));
    if (!seen_edges.emplace(e.from, e.to).second) {
      out.push_back("duplicate edge " + edge_text(net, e));
    }
  }
  VertexSet from_source = reach_forward(net, net.source());
  for (VertexId t : net.targets()) {
    if (!from_source[t]) {
      out.push_back("target " + net.vertex_name(t) + " unreachable from source");
    }
  }
  VertexSet to_target = reach_backward(net, net.targets());
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    if (!to_target[v]) {
      out.push_back("vertex " + net.vertex_name(v) + " cannot reach a target");
    }
  }
  return out;
}

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kMalformed, where + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      throw Error(ErrorCode::kMalformed,
                  "unknown key '" + key + "' in " + where);
    }
  }
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformed,
                where + "." + key + " must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& value,
                                     const std::string& where) {
  if (!value.is_array()) {
    throw Error(ErrorCode::kMalformed, where + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw Error(ErrorCode::kMalformed, where + " must be an array of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

FlowNetwork parse_network_unchecked(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.byte == 0 ? 0 : e.byte - 1, e.what());
  }
  require_keys(doc, {"ap", "vertices", "source", "targets", "edges"}, "network");

  std::vector<std::string> ap;
  if (doc.contains("ap")) ap = string_list(doc["ap"], "ap");

  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw Error(ErrorCode::kMalformed, "vertices must be an array");
  }
  std::vector<VertexSpec> vertices;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const json& v = doc["vertices"][i];
    std::string where = "vertices[" + std::to_string(i) + "]";
    require_keys(v, {"id", "labels"}, where);
    VertexSpec spec;
    spec.id = require_string(v, "id", where);
    if (v.contains("labels")) spec.labels = string_list(v["labels"], where + ".labels");
    vertices.push_back(std::move(spec));
  }
  std::string source = require_string(doc, "source", "network");
  if (!doc.contains("targets")) {
    throw Error(ErrorCode::kMalformed, "targets must be an array of strings");
  }
  std::vector<std::string> targets = string_list(doc["targets"], "targets");

  std::vector<EdgeSpec> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) {
      throw Error(ErrorCode::kMalformed, "edges must be an array");
    }
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
      const json& e = doc["edges"][i];
      std::string where = "edges[" + std::to_string(i) + "]";
      require_keys(e, {"from", "to", "cap"}, where);
      EdgeSpec spec;
      spec.from = require_string(e, "from", where);
      spec.to = require_string(e, "to", where);
      auto cap = e.find("cap");
      if (cap == e.end() || !cap->is_number_integer()) {
        throw Error(ErrorCode::kMalformed, where + ".cap must be an integer");
      }
      spec.capacity = cap->get<std::int64_t>();
      edges.push_back(std::move(spec));
    }
  }

  return FlowNetwork(std::move(ap), std::move(vertices), source, targets, edges);
}

FlowNetwork parse_network(std::string_view text) {
  FlowNetwork net = parse_network_unchecked(text);
  auto violations = validate(net);
  if (!violations.empty()) {
    std::string message = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) {
      message += "; " + violations[i];
    }
    throw Error(ErrorCode::kInvalidNetwork, message);
  }
  return net;
}

std::string serialize_network(const FlowNetwork& net) {
  json doc;
  doc["ap"] = net.ap();
  json vertices = json::array();
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    vertices.push_back({{"id", net.vertex_name(v)}, {"labels", net.labels(v)}});
  }
  doc["vertices"] = std::move(vertices);
  doc["source"] = net.vertex_name(net.source());
  json targets = json::array();
  for (VertexId t : net.targets()) targets.push_back(net.vertex_name(t));
  doc["targets"] = std::move(targets);
  json edges = json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"from", net.vertex_name(e.from)},
                     {"to", net.vertex_name(e.to)},
                     {"cap", e.capacity}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

FlowNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformed, "cannot open network file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

std::vector<VertexSet> successor_layers(const FlowNetwork& net, VertexId v,
                                        std::size_t k) {
  std::vector<VertexSet> layers;
  layers.reserve(k + 1);
  VertexSet current(net.num_vertices(), false);
  current[v] = true;
  layers.push_back(current);
  for (std::size_t j = 1; j <= k; ++j) {
    VertexSet next(net.num_vertices(), false);
    for (VertexId u = 0; u < net.num_vertices(); ++u) {
      if (!current[u]) continue;
      for (EdgeId e : net.out_edges(u)) next[net.edge(e).to] = true;
    }
    current = std::move(next);
    layers.push_back(current);
  }
  return layers;
}

VertexSet forward_closure(const FlowNetwork& net, const VertexSet& from) {
  VertexSet seen = from;
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    if (from[v]) queue.push_back(v);
  }
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    for (EdgeId e : net.out_edges(u)) {
      VertexId w = net.edge(e).to;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

ReachabilityLayers reachability_layers(const FlowNetwork& net, VertexId v,
                                       std::size_t k) {
  auto layers = successor_layers(net, v, k);
  ReachabilityLayers out;
  out.exactly_k = layers[k];
  out.at_least_k = forward_closure(net, layers[k]);
  for (std::size_t j = 0; j < k; ++j) {
    for (VertexId t : net.targets()) {
      if (layers[j][t]) out.short_target_path_exists = true;
    }
  }
  return out;
}

RefinedNetwork refine_for_positive_paths(const FlowNetwork& net) {
  std::set<std::string> taken(net.ap().begin(), net.ap().end());
  std::string edge_prop = "edge";
  for (int i = 1; taken.count(edge_prop); ++i) {
    edge_prop = "edge_" + std::to_string(i);
  }
  std::set<std::string> names;
  for (VertexId v = 0; v < net.num_vertices(); ++v) names.insert(net.vertex_name(v));

  std::vector<std::string> ap = net.ap();
  ap.push_back(edge_prop);
  std::vector<VertexSpec> vertices;
  for (VertexId v = 0; v < net.num_vertices(); ++v) vertices.push_back(net.vertex_spec(v));
  std::vector<EdgeSpec> edges;
  std::vector<VertexId> middle;
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(e);
    std::string name = net.vertex_name(edge.from) + "~" + net.vertex_name(edge.to);
    while (names.count(name)) name += "'";
    names.insert(name);
    middle.push_back(vertices.size());
    vertices.push_back(VertexSpec{name, {edge_prop}});
    edges.push_back(EdgeSpec{net.vertex_name(edge.from), name, edge.capacity});
    edges.push_back(EdgeSpec{name, net.vertex_name(edge.to), edge.capacity});
  }
  std::vector<std::string> targets;
  for (VertexId t : net.targets()) targets.push_back(net.vertex_name(t));
  return RefinedNetwork{
      FlowNetwork(std::move(ap), std::move(vertices),
                  net.vertex_name(net.source()), targets, edges),
      edge_prop, std::move(middle)};
}

}  // namespace flowlogic
