#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowlogic/network.hpp"
#include "flowlogic/rational.hpp"

namespace flowlogic {

enum class FlowKind { kIntegral, kRational };

// Edge-indexed flow amounts. Integral flows keep exact integers; rational
// flows may carry any nonnegative rational.
class FlowFunction {
 public:
  FlowFunction() = default;

  static FlowFunction integral(std::vector<std::int64_t> values);
  static FlowFunction rational(std::vector<Rational> values);

  FlowKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  const Rational& operator[](EdgeId e) const { return values_[e]; }
  const std::vector<Rational>& values() const { return values_; }

  // Outflow at the source, inflow elsewhere.
  Rational vertex_value(const FlowNetwork& net, VertexId v) const;
  std::vector<Rational> vertex_values(const FlowNetwork& net) const;

  // Present only when every edge value is an integer.
  std::optional<std::vector<std::int64_t>> as_integers() const;

 private:
  FlowKind kind_ = FlowKind::kIntegral;
  std::vector<Rational> values_;
};

// Capacity, nonnegativity, conservation, and integrality (for integral
// flows) violations. Empty iff the flow is legal for the network.
std::vector<std::string> check_flow(const FlowNetwork& net,
                                    const FlowFunction& flow);

// Per-vertex values of an integral edge assignment.
std::vector<std::int64_t> vertex_values(const FlowNetwork& net,
                                        std::span<const std::int64_t> flow);

// {"kind": "...", "edges": [{"from", "to", "flow"}]}; rational amounts are
// written as "p/q" strings, integral ones as JSON integers.
std::string serialize_flow(const FlowNetwork& net, const FlowFunction& flow);
FlowFunction parse_flow(const FlowNetwork& net, std::string_view text);

}  // namespace flowlogic
