#include <cctype>
#include <set>
#include <vector>

#include "flowlogic/error.hpp"
#include "flowlogic/formula.hpp"

namespace flowlogic {

namespace {

enum class Tok {
  kIdent,
  kInt,
  kLParen,
  kRParen,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kGt,
  kGe,
  kLt,
  kLe,
  kEq,
  kQuestion,
  kPlus,
  kStar,
  kMinus,
  kDot,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      std::string word(s.substr(start, i - start));
      if ((word == "A" || word == "E") && i < s.size() && s[i] == '+') {
        word += '+';
        ++i;
      }
      out.push_back({Tok::kIdent, word, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::kInt, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '!': kind = Tok::kNot; break;
      case '&': kind = Tok::kAnd; break;
      case '|': kind = Tok::kOr; break;
      case '?': kind = Tok::kQuestion; break;
      case '+': kind = Tok::kPlus; break;
      case '*': kind = Tok::kStar; break;
      case '.': kind = Tok::kDot; break;
      case '=': kind = Tok::kEq; break;
      case '-':
        kind = two('>') ? Tok::kImplies : Tok::kMinus;
        len = two('>') ? 2 : 1;
        break;
      case '>':
        kind = two('=') ? Tok::kGe : Tok::kGt;
        len = two('=') ? 2 : 1;
        break;
      case '<':
        kind = two('=') ? Tok::kLe : Tok::kLt;
        len = two('=') ? 2 : 1;
        break;
      default:
        throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(s.substr(start, len)), start});
    i += len;
  }
  out.push_back({Tok::kEnd, "", s.size()});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> words = {
      "true", "false", "A", "E", "A+", "E+", "Af", "Ef", "AfMax", "EfMax", "AfR", "EfR",
      "forall", "exists", "X", "F", "G", "Y", "U", "S", "gmax", "div"};
  return words;
}

class Parser {
 public:
  Parser(std::string_view text, bool path_mode)
      : tokens_(tokenize(text)), path_depth_(path_mode ? 1 : 0) {}

  FormulaPtr parse() {
    FormulaPtr f = implies();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool peek_word(std::string_view w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }
  Token take() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(peek().pos, message);
  }
  void expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      fail("expected " + std::string(what) +
           (peek().kind == Tok::kEnd ? " at end of input" : ", found '" + peek().text + "'"));
    }
    ++pos_;
  }

  FormulaPtr implies() {
    FormulaPtr lhs = disjunction();
    if (peek().kind == Tok::kImplies) {
      take();
      return Formula::implication(lhs, implies());
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (peek().kind == Tok::kOr) {
      take();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{binary_temporal()};
    while (peek().kind == Tok::kAnd) {
      take();
      parts.push_back(binary_temporal());
    }
    return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
  }

  FormulaPtr binary_temporal() {
    FormulaPtr lhs = unary();
    if (peek_word("U") || peek_word("S")) {
      require_path_context();
      bool until = take().text == "U";
      FormulaPtr rhs = binary_temporal();
      return until ? Formula::until(lhs, rhs) : Formula::since(lhs, rhs);
    }
    return lhs;
  }

  void require_path_context() const {
    if (path_depth_ == 0) fail("temporal operator '" + peek().text + "' outside a path quantifier");
  }

  FormulaPtr unary() {
    const Token& t = peek();
    if (t.kind == Tok::kNot) {
      take();
      return Formula::negation(unary());
    }
    if (t.kind != Tok::kIdent) return primary();
    const std::string& w = t.text;
    if (w == "X" || w == "F" || w == "G" || w == "Y") {
      require_path_context();
      std::string op = take().text;
      FormulaPtr body = unary();
      if (op == "X") return Formula::next(body);
      if (op == "F") return Formula::eventually(body);
      if (op == "G") return Formula::always(body);
      return Formula::yesterday(body);
    }
    if (w == "A" || w == "E" || w == "A+" || w == "E+") {
      PathQuantifier q = w == "A"    ? PathQuantifier::kA
                         : w == "E"  ? PathQuantifier::kE
                         : w == "A+" ? PathQuantifier::kAPlus
                                     : PathQuantifier::kEPlus;
      take();
      ++path_depth_;
      FormulaPtr body = unary();
      --path_depth_;
      return Formula::path(q, body);
    }
    static const std::pair<const char*, FlowQuantifier> flow_words[] = {
        {"Af", FlowQuantifier::kAf},       {"Ef", FlowQuantifier::kEf},
        {"AfMax", FlowQuantifier::kAfMax}, {"EfMax", FlowQuantifier::kEfMax},
        {"AfR", FlowQuantifier::kAfR},     {"EfR", FlowQuantifier::kEfR}};
    for (const auto& [word, q] : flow_words) {
      if (w == word) {
        take();
        return Formula::flow(q, unary());
      }
    }
    if (w == "forall" || w == "exists") {
      ValueQuantifier q = w == "forall" ? ValueQuantifier::kForall : ValueQuantifier::kExists;
      take();
      if (peek().kind != Tok::kIdent || keywords().count(peek().text)) {
        fail("expected a variable name");
      }
      std::string var = take().text;
      expect(Tok::kDot, "'.'");
      bound_.push_back(var);
      FormulaPtr body = unary();
      bound_.pop_back();
      return Formula::value(q, var, body);
    }
    return primary();
  }

  bool is_bound(const std::string& name) const {
    for (const auto& b : bound_) {
      if (b == name) return true;
    }
    return false;
  }

  FormulaPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kLParen: {
        take();
        FormulaPtr f = implies();
        expect(Tok::kRParen, "')'");
        return f;
      }
      case Tok::kQuestion:
        take();
        return Formula::placeholder();
      case Tok::kGt:
      case Tok::kGe:
      case Tok::kLt:
      case Tok::kLe:
      case Tok::kEq: {
        Tok k = take().kind;
        CmpOp op = k == Tok::kGt   ? CmpOp::kGt
                   : k == Tok::kGe ? CmpOp::kGe
                   : k == Tok::kLt ? CmpOp::kLt
                   : k == Tok::kLe ? CmpOp::kLe
                                   : CmpOp::kEq;
        return Formula::flow_prop(op, expr());
      }
      case Tok::kInt:
        return Formula::flow_prop(CmpOp::kEq, integer());
      case Tok::kIdent: {
        if (t.text == "true") {
          take();
          return Formula::make_true();
        }
        if (t.text == "false") {
          take();
          return Formula::make_false();
        }
        if (keywords().count(t.text)) fail("unexpected keyword '" + t.text + "'");
        std::string name = take().text;
        if (is_bound(name)) return Formula::flow_prop(CmpOp::kEq, ValueExpr::variable(name));
        return Formula::atom(name);
      }
      case Tok::kEnd:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  ValueExprPtr integer() {
    const Token& t = peek();
    if (t.kind != Tok::kInt) fail("expected an integer");
    try {
      std::size_t used = 0;
      long long v = std::stoll(t.text, &used);
      take();
      return ValueExpr::constant(v);
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }

  ValueExprPtr expr() {
    ValueExprPtr lhs = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      ValueOp op = take().kind == Tok::kPlus ? ValueOp::kAdd : ValueOp::kSub;
      lhs = ValueExpr::binary(op, lhs, term());
    }
    return lhs;
  }

  ValueExprPtr term() {
    ValueExprPtr lhs = factor();
    while (peek().kind == Tok::kStar || peek_word("div")) {
      bool mul = take().kind == Tok::kStar;
      if (mul) {
        lhs = ValueExpr::binary(ValueOp::kMul, lhs, factor());
      } else {
        if (peek().kind != Tok::kInt) fail("div requires a positive integer literal");
        ValueExprPtr divisor = integer();
        if (divisor->value <= 0) {
          --pos_;
          fail("div requires a positive integer literal");
        }
        lhs = ValueExpr::binary(ValueOp::kDiv, lhs, divisor);
      }
    }
    return lhs;
  }

  ValueExprPtr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kInt: return integer();
      case Tok::kQuestion:
        take();
        return ValueExpr::placeholder();
      case Tok::kLParen: {
        take();
        ValueExprPtr e = expr();
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent:
        if (t.text == "gmax") {
          take();
          return ValueExpr::gmax();
        }
        if (keywords().count(t.text)) fail("unexpected keyword '" + t.text + "' in expression");
        return ValueExpr::variable(take().text);
      default:
        fail(t.kind == Tok::kEnd ? "expected an expression at end of input"
                                 : "expected an expression, found '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int path_depth_;
  std::vector<std::string> bound_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text, false).parse(); }

FormulaPtr parse_path_formula(std::string_view text) { return Parser(text, true).parse(); }

}  // namespace flowlogic
