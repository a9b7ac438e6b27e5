#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace flowlogic::detail {

// Hash-consed finite-trace LTL formulas in negation normal form, with
// formula progression. And/Or children are flattened, sorted, and
// deduplicated, so equal residuals get equal ids.
class Progression {
 public:
  using Node = std::uint32_t;
  // Truth of the literal (atom, positive) at the current position.
  using Truth = std::function<bool(std::uint32_t atom, bool positive)>;

  enum class Op : std::uint8_t {
    kTrue,
    kFalse,
    kLit,
    kNegLit,
    kAnd,
    kOr,
    kNext,
    kWeakNext,
    kUntil,
    kRelease,
  };

  Progression();

  Node top() const { return 0; }
  Node bottom() const { return 1; }
  Node literal(std::uint32_t atom, bool positive);
  Node conj(std::vector<Node> kids);
  Node disj(std::vector<Node> kids);
  Node next(Node a);
  Node weak_next(Node a);
  Node until(Node a, Node b);
  Node release(Node a, Node b);

  // Residual obligation for the rest of the path after consuming the
  // current position.
  Node progress(Node n, const Truth& truth, std::unordered_map<Node, Node>& cache);
  // Truth of n when the current position is the last one.
  bool final_value(Node n, const Truth& truth);

  Op op(Node n) const { return nodes_[n].op; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Entry {
    Op op;
    std::uint32_t atom;
    std::vector<Node> kids;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const;
  };

  Node intern(Op op, std::uint32_t atom, std::vector<Node> kids);
  Node nary(Op op, std::vector<Node> kids);

  std::vector<Entry> nodes_;
  std::unordered_map<std::vector<std::uint32_t>, Node, KeyHash> index_;
};

}  // namespace flowlogic::detail
