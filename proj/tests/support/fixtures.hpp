#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowlogic/network.hpp"

namespace flowlogic::testing {

// s -> u, s -> v, u -> t, v -> t, capacity 1 each.
FlowNetwork two_successor_network();

// s->u 4, s->v 4, v->u 4, u->t 4, v->t 3: max flow 7, full unwinding 8.
FlowNetwork diamond_network();

// One edge s -> t.
FlowNetwork single_edge_network(std::int64_t capacity);

// s -> a -> t.
FlowNetwork chain_network(std::int64_t capacity = 1);

// Builds a network from "from>to:cap" items, targets and labels given as
// "vertex:p,q". Vertices appear in order of first mention, source first.
FlowNetwork make_network(const std::vector<std::string>& edges, const std::vector<std::string>& targets,
                         const std::vector<std::string>& ap = {},
                         const std::vector<std::string>& labels = {});

}  // namespace flowlogic::testing
