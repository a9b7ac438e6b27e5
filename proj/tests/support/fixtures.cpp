#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace flowlogic::testing {

FlowNetwork two_successor_network() {
  return make_network({"s>u:1", "s>v:1", "u>t:1", "v>t:1"}, {"t"});
}

FlowNetwork diamond_network() {
  return make_network({"s>u:4", "s>v:4", "v>u:4", "u>t:4", "v>t:3"}, {"t"});
}

FlowNetwork single_edge_network(std::int64_t capacity) {
  return make_network({"s>t:" + std::to_string(capacity)}, {"t"});
}

FlowNetwork chain_network(std::int64_t capacity) {
  std::string c = std::to_string(capacity);
  return make_network({"s>a:" + c, "a>t:" + c}, {"t"});
}

FlowNetwork make_network(const std::vector<std::string>& edges, const std::vector<std::string>& targets,
                         const std::vector<std::string>& ap, const std::vector<std::string>& labels) {
  std::vector<std::string> order;
  auto mention = [&](const std::string& name) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  };
  std::vector<EdgeSpec> specs;
  for (const auto& item : edges) {
    auto gt = item.find('>');
    auto colon = item.find(':');
    EdgeSpec e{item.substr(0, gt), item.substr(gt + 1, colon - gt - 1), std::stoll(item.substr(colon + 1))};
    mention(e.from);
    mention(e.to);
    specs.push_back(std::move(e));
  }
  for (const auto& t : targets) mention(t);
  std::vector<VertexSpec> vertices;
  for (const auto& name : order) {
    VertexSpec v{name, {}};
    for (const auto& l : labels) {
      auto colon = l.find(':');
      if (l.substr(0, colon) != name) continue;
      std::stringstream props(l.substr(colon + 1));
      std::string p;
      while (std::getline(props, p, ',')) {
        if (!p.empty()) v.labels.push_back(p);
      }
    }
    vertices.push_back(std::move(v));
  }
  return FlowNetwork(ap, std::move(vertices), order.front(), targets, specs);
}

}  // namespace flowlogic::testing
