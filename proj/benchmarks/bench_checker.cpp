#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "flowlogic/cbfl.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/network.hpp"

using namespace flowlogic;

namespace {

// s -> v1 -> ... -> vn, every vi -> t; p on odd vertices.
FlowNetwork path_network(int length) {
  std::vector<VertexSpec> vertices{{"s", {}}};
  std::vector<EdgeSpec> edges;
  std::string prev = "s";
  for (int i = 1; i <= length; ++i) {
    std::string v = "v" + std::to_string(i);
    vertices.push_back({v, i % 2 ? std::vector<std::string>{"p"} : std::vector<std::string>{}});
    edges.push_back({prev, v, 4});
    edges.push_back({v, "t", 2});
    prev = v;
  }
  vertices.push_back({"t", {}});
  return FlowNetwork({"p"}, std::move(vertices), "s", {"t"}, edges);
}

const char* kConjunctive = "Ef(>= 2 & A X >= 1 & A X X G <= 3 & A X X (p | EfMax A X > 0))";

}  // namespace

static void BM_CheckCbfl(benchmark::State& state) {
  FlowNetwork net = path_network(static_cast<int>(state.range(0)));
  FormulaPtr phi = parse_formula(kConjunctive);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_cbfl(net, phi).satisfied);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CheckCbfl)->RangeMultiplier(2)->Range(25, 400)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_CheckGeneral(benchmark::State& state) {
  FlowNetwork net = path_network(static_cast<int>(state.range(0)));
  FormulaPtr phi = parse_formula("Ef(= 2 & E F (p & = 2))");
  for (auto _ : state) {
    benchmark::DoNotOptimize(check(net, phi).satisfied);
  }
}
BENCHMARK(BM_CheckGeneral)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_formula(kConjunctive));
  }
}
BENCHMARK(BM_Parse);

BENCHMARK_MAIN();
