#include "flowlogic/flow.hpp"

#include <map>

#include "flowlogic/error.hpp"
#include "json.hpp"

namespace flowlogic {

using json = nlohmann::json;

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw Error(ErrorCode::kMalformed, "not a rational number: '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw Error(ErrorCode::kMalformed, "zero denominator in '" + text + "'");
  }
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::int64_t to_int64(const Rational& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p()) {
    throw Error(ErrorCode::kPrecondition,
                "value " + to_string(q) + " is not a 64-bit integer");
  }
  return q.get_num().get_si();
}

FlowFunction FlowFunction::integral(std::vector<std::int64_t> values) {
  FlowFunction f;
  f.kind_ = FlowKind::kIntegral;
  f.values_.reserve(values.size());
  for (auto v : values) f.values_.push_back(make_rational(v));
  return f;
}

FlowFunction FlowFunction::rational(std::vector<Rational> values) {
  FlowFunction f;
  f.kind_ = FlowKind::kRational;
  for (auto& v : values) v.canonicalize();
  f.values_ = std::move(values);
  return f;
}

Rational FlowFunction::vertex_value(const FlowNetwork& net, VertexId v) const {
  Rational total = 0;
  const auto& edges = v == net.source() ? net.out_edges(v) : net.in_edges(v);
  for (EdgeId e : edges) total += values_[e];
  return total;
}

std::vector<Rational> FlowFunction::vertex_values(const FlowNetwork& net) const {
  std::vector<Rational> out;
  out.reserve(net.num_vertices());
  for (VertexId v = 0; v < net.num_vertices(); ++v) out.push_back(vertex_value(net, v));
  return out;
}

std::optional<std::vector<std::int64_t>> FlowFunction::as_integers() const {
  std::vector<std::int64_t> out;
  out.reserve(values_.size());
  for (const auto& q : values_) {
    if (!is_integer(q) || !q.get_num().fits_slong_p()) return std::nullopt;
    out.push_back(q.get_num().get_si());
  }
  return out;
}

std::vector<std::string> check_flow(const FlowNetwork& net,
                                    const FlowFunction& flow) {
  std::vector<std::string> out;
  if (flow.size() != net.num_edges()) {
    out.push_back("flow has " + std::to_string(flow.size()) +
                  " values for " + std::to_string(net.num_edges()) + " edges");
    return out;
  }
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(e);
    std::string name =
        "(" + net.vertex_name(edge.from) + "," + net.vertex_name(edge.to) + ")";
    if (flow[e] < 0) out.push_back("negative flow on " + name);
    if (flow[e] > edge.capacity) out.push_back("flow exceeds capacity on " + name);
    if (flow.kind() == FlowKind::kIntegral && !is_integer(flow[e])) {
      out.push_back("non-integral flow on " + name);
    }
  }
  for (VertexId v = 0; v < net.num_vertices(); ++v) {
    if (v == net.source() || net.is_target(v)) continue;
    Rational in = 0, out_sum = 0;
    for (EdgeId e : net.in_edges(v)) in += flow[e];
    for (EdgeId e : net.out_edges(v)) out_sum += flow[e];
    if (in != out_sum) {
      out.push_back("conservation violated at " + net.vertex_name(v));
    }
  }
  return out;
}

std::vector<std::int64_t> vertex_values(const FlowNetwork& net,
                                        std::span<const std::int64_t> flow) {
  std::vector<std::int64_t> out(net.num_vertices(), 0);
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(e);
    out[edge.to] += flow[e];
    if (edge.from == net.source()) out[edge.from] += flow[e];
  }
  return out;
}

std::string serialize_flow(const FlowNetwork& net, const FlowFunction& flow) {
  json doc;
  doc["kind"] = flow.kind() == FlowKind::kIntegral ? "integral" : "rational";
  json edges = json::array();
  for (EdgeId e = 0; e < flow.size(); ++e) {
    const Edge& edge = net.edge(e);
    json item = {{"from", net.vertex_name(edge.from)},
                 {"to", net.vertex_name(edge.to)}};
    if (is_integer(flow[e]) && flow[e].get_num().fits_slong_p()) {
      item["flow"] = flow[e].get_num().get_si();
    } else {
      item["flow"] = to_string(flow[e]);
    }
    edges.push_back(std::move(item));
  }
  doc["edges"] = std::move(edges);
  return doc.dump();
}

FlowFunction parse_flow(const FlowNetwork& net, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.byte == 0 ? 0 : e.byte - 1, e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
    throw Error(ErrorCode::kMalformed, "flow must be an object with an edges array");
  }
  std::map<std::pair<std::string, std::string>, EdgeId> index;
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(e);
    index[{net.vertex_name(edge.from), net.vertex_name(edge.to)}] = e;
  }
  std::vector<Rational> values(net.num_edges(), 0);
  for (const auto& item : doc["edges"]) {
    auto it = index.find({item.value("from", ""), item.value("to", "")});
    if (it == index.end()) {
      throw Error(ErrorCode::kMalformed, "flow names an edge not in the network");
    }
    const json& amount = item.at("flow");
    if (amount.is_number_integer()) {
      values[it->second] = make_rational(amount.get<std::int64_t>());
    } else if (amount.is_string()) {
      values[it->second] = parse_rational(amount.get<std::string>());
    } else {
      throw Error(ErrorCode::kMalformed, "flow amounts must be integers or \"p/q\" strings");
    }
  }
  bool integral = doc.value("kind", "integral") == "integral";
  if (integral) {
    FlowFunction f = FlowFunction::rational(std::move(values));
    if (auto ints = f.as_integers()) return FlowFunction::integral(*ints);
    throw Error(ErrorCode::kMalformed, "integral flow has a fractional amount");
  }
  return FlowFunction::rational(std::move(values));
}

}  // namespace flowlogic
