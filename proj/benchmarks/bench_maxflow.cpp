#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "flowlogic/maxflow.hpp"
#include "flowlogic/network.hpp"

using namespace flowlogic;

namespace {

// Layered DAG: `layers` layers of `width` vertices, random capacities.
FlowNetwork layered(int layers, int width, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::int64_t> cap(1, 20);
  auto name = [](int l, int i) { return "v" + std::to_string(l) + "_" + std::to_string(i); };
  std::vector<VertexSpec> vertices{{"s", {}}};
  std::vector<EdgeSpec> edges;
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < width; ++i) vertices.push_back({name(l, i), {}});
  }
  vertices.push_back({"t", {}});
  for (int i = 0; i < width; ++i) {
    edges.push_back({"s", name(0, i), cap(rng)});
    edges.push_back({name(layers - 1, i), "t", cap(rng)});
  }
  for (int l = 0; l + 1 < layers; ++l) {
    for (int i = 0; i < width; ++i) {
      for (int j = 0; j < width; ++j) {
        if (rng() % 3 == 0 || i == j) edges.push_back({name(l, i), name(l + 1, j), cap(rng)});
      }
    }
  }
  return FlowNetwork({}, std::move(vertices), "s", {"t"}, edges);
}

}  // namespace

static void BM_MaxFlow(benchmark::State& state) {
  FlowNetwork net = layered(static_cast<int>(state.range(0)), 16, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_flow(net).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaxFlow)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BM_VertexConstrainedFlow(benchmark::State& state) {
  FlowNetwork net = layered(static_cast<int>(state.range(0)), 16, 11);
  std::vector<VertexRange> ranges(net.num_vertices(), VertexRange::unbounded());
  for (VertexId v = 1; v + 1 < net.num_vertices(); v += 3) ranges[v] = VertexRange::closed(2, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vertex_constrained_flow(net, ranges));
  }
}
BENCHMARK(BM_VertexConstrainedFlow)->RangeMultiplier(2)->Range(4, 64);

BENCHMARK_MAIN();
