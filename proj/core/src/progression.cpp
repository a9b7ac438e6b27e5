#include "progression.hpp"

#include <algorithm>

namespace flowlogic::detail {

std::size_t Progression::KeyHash::operator()(const std::vector<std::uint32_t>& key) const {
  std::size_t h = key.size();
  for (auto k : key) h ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Progression::Progression() {
  intern(Op::kTrue, 0, {});
  intern(Op::kFalse, 0, {});
}

Progression::Node Progression::intern(Op op, std::uint32_t atom, std::vector<Node> kids) {
  std::vector<std::uint32_t> key;
  key.reserve(kids.size() + 2);
  key.push_back(static_cast<std::uint32_t>(op));
  key.push_back(atom);
  key.insert(key.end(), kids.begin(), kids.end());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Node id = static_cast<Node>(nodes_.size());
  nodes_.push_back({op, atom, std::move(kids)});
  index_.emplace(std::move(key), id);
  return id;
}

Progression::Node Progression::literal(std::uint32_t atom, bool positive) {
  return intern(positive ? Op::kLit : Op::kNegLit, atom, {});
}

Progression::Node Progression::nary(Op op, std::vector<Node> kids) {
  const Node unit = op == Op::kAnd ? top() : bottom();
  const Node zero = op == Op::kAnd ? bottom() : top();
  std::vector<Node> flat;
  for (Node k : kids) {
    if (k == zero) return zero;
    if (k == unit) continue;
    if (nodes_[k].op == op) {
      flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
    } else {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (std::size_t i = 0; i + 1 < flat.size(); ++i) {
    const Entry& a = nodes_[flat[i]];
    const Entry& b = nodes_[flat[i + 1]];
    bool complementary = a.atom == b.atom &&
                         ((a.op == Op::kLit && b.op == Op::kNegLit) ||
                          (a.op == Op::kNegLit && b.op == Op::kLit));
    if (complementary) return zero;
  }
  if (flat.empty()) return unit;
  if (flat.size() == 1) return flat.front();
  return intern(op, 0, std::move(flat));
}

Progression::Node Progression::conj(std::vector<Node> kids) { return nary(Op::kAnd, std::move(kids)); }
Progression::Node Progression::disj(std::vector<Node> kids) { return nary(Op::kOr, std::move(kids)); }
Progression::Node Progression::next(Node a) { return intern(Op::kNext, 0, {a}); }
Progression::Node Progression::weak_next(Node a) { return intern(Op::kWeakNext, 0, {a}); }

Progression::Node Progression::until(Node a, Node b) {
  if (b == top() || b == bottom()) return b;
  return intern(Op::kUntil, 0, {a, b});
}

Progression::Node Progression::release(Node a, Node b) {
  if (b == top() || b == bottom()) return b;
  return intern(Op::kRelease, 0, {a, b});
}

Progression::Node Progression::progress(Node n, const Truth& truth,
                                        std::unordered_map<Node, Node>& cache) {
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Node result = n;
  // Copy: interning may reallocate nodes_.
  Entry e = nodes_[n];
  switch (e.op) {
    case Op::kTrue:
    case Op::kFalse: result = n; break;
    case Op::kLit: result = truth(e.atom, true) ? top() : bottom(); break;
    case Op::kNegLit: result = truth(e.atom, false) ? top() : bottom(); break;
    case Op::kAnd:
    case Op::kOr: {
      std::vector<Node> kids;
      for (Node k : e.kids) kids.push_back(progress(k, truth, cache));
      result = e.op == Op::kAnd ? conj(std::move(kids)) : disj(std::move(kids));
      break;
    }
    case Op::kNext:
    case Op::kWeakNext: result = e.kids[0]; break;
    case Op::kUntil: {
      Node a = progress(e.kids[0], truth, cache);
      Node b = progress(e.kids[1], truth, cache);
      result = disj({b, conj({a, n})});
      break;
    }
    case Op::kRelease: {
      Node a = progress(e.kids[0], truth, cache);
      Node b = progress(e.kids[1], truth, cache);
      result = conj({b, disj({a, n})});
      break;
    }
  }
  cache.emplace(n, result);
  return result;
}

bool Progression::final_value(Node n, const Truth& truth) {
  const Entry& e = nodes_[n];
  switch (e.op) {
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kLit: return truth(e.atom, true);
    case Op::kNegLit: return truth(e.atom, false);
    case Op::kAnd:
      for (Node k : e.kids) {
        if (!final_value(k, truth)) return false;
      }
      return true;
    case Op::kOr:
      for (Node k : e.kids) {
        if (final_value(k, truth)) return true;
      }
      return false;
    case Op::kNext: return false;
    case Op::kWeakNext: return true;
    case Op::kUntil:
    case Op::kRelease: return final_value(e.kids[1], truth);
  }
  return false;
}

}  // namespace flowlogic::detail
