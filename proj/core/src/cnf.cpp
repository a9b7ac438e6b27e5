#include <cstdlib>
#include <set>

#include "flowlogic/error.hpp"
#include "flowlogic/oracle.hpp"

namespace flowlogic {

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (int lit : clause) {
      bool value = assignment[static_cast<std::size_t>(std::abs(lit) - 1)];
      sat = sat || (lit > 0 ? value : !value);
    }
    if (!sat) return false;
  }
  return true;
}

std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f) {
  const auto n = static_cast<std::size_t>(f.num_variables);
  std::vector<bool> a(n, false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1u;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

std::size_t literal_count(const CnfFormula& f, int literal) {
  std::size_t count = 0;
  for (const auto& clause : f.clauses) {
    for (int lit : clause) count += lit == literal ? 1 : 0;
  }
  return count;
}

CnfFormula balance_cnf(const CnfFormula& f) {
  if (f.num_variables < 2) {
    throw Error(ErrorCode::kTooFewVariables, "balancing needs at least two variables");
  }
  CnfFormula out;
  out.num_variables = f.num_variables;
  for (const auto& clause : f.clauses) {
    std::set<int> lits(clause.begin(), clause.end());
    out.clauses.emplace_back(lits.begin(), lits.end());
  }
  // Even out x_i against !x_i with (l | x_j | !x_j), which leaves the pair j
  // balanced against itself.
  for (int i = 1; i <= f.num_variables; ++i) {
    int j = i == 1 ? 2 : 1;
    std::size_t pos = literal_count(out, i);
    std::size_t neg = literal_count(out, -i);
    int deficient = pos < neg ? i : -i;
    for (std::size_t d = pos < neg ? neg - pos : pos - neg; d > 0; --d) {
      out.clauses.push_back({deficient, j, -j});
    }
  }
  std::size_t k = 1;
  for (int i = 1; i <= f.num_variables; ++i) k = std::max(k, literal_count(out, i));
  for (int i = 1; i <= f.num_variables; ++i) {
    for (std::size_t c = literal_count(out, i); c < k; ++c) out.clauses.push_back({i, -i});
  }
  return out;
}

CnfInstance cnf_to_network(const CnfFormula& f) {
  const int n = f.num_variables;
  std::size_t k = literal_count(f, 1);
  for (int i = 1; i <= n; ++i) {
    if (literal_count(f, i) != k || literal_count(f, -i) != k || k == 0) {
      throw Error(ErrorCode::kNotBalanced, "literal x" + std::to_string(i) +
                                               " does not occur exactly as often as the others");
    }
  }
  for (const auto& clause : f.clauses) {
    if (std::set<int>(clause.begin(), clause.end()).size() != clause.size()) {
      throw Error(ErrorCode::kNotBalanced, "a literal repeats within a clause");
    }
  }
  const auto kk = static_cast<std::int64_t>(k);
  std::vector<VertexSpec> vertices{{"s", {}}};
  std::vector<EdgeSpec> edges;
  for (int i = 1; i <= n; ++i) {
    std::string x = "x" + std::to_string(i);
    vertices.push_back({x, {}});
    vertices.push_back({x + "+", {}});
    vertices.push_back({x + "-", {}});
    edges.push_back({"s", x, kk});
    edges.push_back({x, x + "+", kk});
    edges.push_back({x, x + "-", kk});
  }
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    std::string name = "c" + std::to_string(c + 1);
    vertices.push_back({name, {}});
    for (int lit : f.clauses[c]) {
      edges.push_back({"x" + std::to_string(std::abs(lit)) + (lit > 0 ? "+" : "-"), name, 1});
    }
    edges.push_back({name, "t", static_cast<std::int64_t>(f.clauses[c].size())});
  }
  vertices.push_back({"t", {}});
  FlowNetwork net({}, std::move(vertices), "s", {"t"}, edges);

  CnfInstance inst{std::move(net), nullptr, kk, {}, {}};
  for (int i = 1; i <= n; ++i) {
    inst.positive_vertex.push_back(*inst.network.find_vertex("x" + std::to_string(i) + "+"));
    inst.negative_vertex.push_back(*inst.network.find_vertex("x" + std::to_string(i) + "-"));
  }
  const std::int64_t kn = kk * n;
  inst.formula = parse_formula("Ef A (= " + std::to_string(kn) + " & X X (= " + std::to_string(kk) +
                               " | = 0) & X X X >= 1)");
  return inst;
}

std::vector<bool> decode_assignment(const CnfInstance& instance, const FlowFunction& flow) {
  std::vector<bool> out;
  for (VertexId v : instance.positive_vertex) {
    out.push_back(flow.vertex_value(instance.network, v) == make_rational(instance.k));
  }
  return out;
}

}  // namespace flowlogic
