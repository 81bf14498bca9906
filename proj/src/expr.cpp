#include "gvlam/expr.hpp"

#include <cctype>
#include <variant>

#include "gvlam/error.hpp"
#include "gvlam/prob.hpp"

namespace gvlam {

struct ExprNode {
  enum Kind { number, param, infinity, neg, add, sub, mul, div, call } kind;
  Rational value;
  std::string name;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      skip();
      if (eat('+')) {
        left = bin(ExprNode::add, left, term());
      } else if (peek() == '-' ) {
        ++p_;
        left = bin(ExprNode::sub, left, term());
      } else {
        return left;
      }
    }
  }

  bool at_end() {
    skip();
    return p_ >= s_.size();
  }
  std::size_t pos() const { return p_; }
  std::string_view rest() const { return s_.substr(p_); }
  void set_pos(std::size_t p) { p_ = p; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("in expression '" + std::string(s_) + "': " + msg);
  }

 private:
  static NodePtr bin(ExprNode::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return n;
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  char peek() {
    skip();
    return p_ < s_.size() ? s_[p_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++p_;
    return true;
  }

  NodePtr term() {
    NodePtr left = unary();
    while (true) {
      if (eat('*'))
        left = bin(ExprNode::mul, left, unary());
      else if (eat('/'))
        left = bin(ExprNode::div, left, unary());
      else
        return left;
    }
  }

  NodePtr unary() {
    if (eat('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::neg;
      n->args = {unary()};
      return n;
    }
    return atom();
  }

  NodePtr atom() {
    char c = peek();
    if (eat('(')) {
      NodePtr inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t q = p_;
      while (q < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[q])) || s_[q] == '.')) ++q;
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::number;
      auto v = try_parse_rational(s_.substr(p_, q - p_));
      if (!v) fail("bad number '" + std::string(s_.substr(p_, q - p_)) + "'");
      n->value = *v;
      p_ = q;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t q = p_;
      while (q < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[q])) || s_[q] == '_')) ++q;
      std::string name(s_.substr(p_, q - p_));
      p_ = q;
      auto n = std::make_shared<ExprNode>();
      if (name == "inf") {
        n->kind = ExprNode::infinity;
        return n;
      }
      if (eat('(')) {
        n->kind = ExprNode::call;
        n->name = name;
        if (!eat(')')) {
          do n->args.push_back(expr());
          while (eat(','));
          if (!eat(')')) fail("expected ')' after arguments of " + name);
        }
        static const std::map<std::string, std::size_t> arity = {{"abs", 1}, {"min", 2}, {"max", 2}, {"phi", 5}};
        auto it = arity.find(name);
        if (it == arity.end()) fail("unknown function '" + name + "'");
        if (it->second != n->args.size()) fail(name + " takes " + std::to_string(it->second) + " arguments");
        return n;
      }
      n->kind = ExprNode::param;
      n->name = name;
      return n;
    }
    fail(c ? std::string("unexpected '") + c + "'" : "unexpected end");
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

struct EVal {
  bool is_rational;
  Rational q;
  Magnitude m;
};

Magnitude as_magnitude(const EVal& v) { return v.is_rational ? Magnitude(v.q) : v.m; }

EVal eval(const ExprNode& n, const ParamEnv& env, bool allow_symbolic) {
  auto rat = [&](const ExprNode& c) {
    EVal v = eval(c, env, allow_symbolic);
    if (!v.is_rational) throw Error("operation needs a rational operand, got " + to_string(v.m));
    return v.q;
  };
  switch (n.kind) {
    case ExprNode::number:
      return {true, n.value, {}};
    case ExprNode::param: {
      auto it = env.find(n.name);
      if (it == env.end()) throw Error("unbound parameter '" + n.name + "'");
      return {true, it->second, {}};
    }
    case ExprNode::infinity:
      if (!allow_symbolic) throw Error("'inf' is not a rational");
      return {false, 0, Magnitude::infinity()};
    case ExprNode::neg:
      return {true, -rat(*n.args[0]), {}};
    case ExprNode::add: {
      EVal a = eval(*n.args[0], env, allow_symbolic);
      EVal b = eval(*n.args[1], env, allow_symbolic);
      if (a.is_rational && b.is_rational) return {true, a.q + b.q, {}};
      return {false, 0, as_magnitude(a) + as_magnitude(b)};
    }
    case ExprNode::sub:
      return {true, rat(*n.args[0]) - rat(*n.args[1]), {}};
    case ExprNode::mul: {
      EVal a = eval(*n.args[0], env, allow_symbolic);
      EVal b = eval(*n.args[1], env, allow_symbolic);
      if (a.is_rational && b.is_rational) return {true, a.q * b.q, {}};
      if (a.is_rational) return {false, 0, b.m.scaled(a.q)};
      if (b.is_rational) return {false, 0, a.m.scaled(b.q)};
      throw Error("product of two symbolic values");
    }
    case ExprNode::div: {
      Rational d = rat(*n.args[1]);
      if (d == 0) throw Error("division by zero");
      EVal a = eval(*n.args[0], env, allow_symbolic);
      if (a.is_rational) return {true, a.q / d, {}};
      return {false, 0, a.m.scaled(1 / d)};
    }
    case ExprNode::call: {
      if (n.name == "abs") return {true, abs(rat(*n.args[0])), {}};
      if (n.name == "min") return {true, std::min(rat(*n.args[0]), rat(*n.args[1])), {}};
      if (n.name == "max") return {true, std::max(rat(*n.args[0]), rat(*n.args[1])), {}};
      if (n.name == "phi") {
        if (!allow_symbolic) throw Error("'phi' is not a rational");
        Rational k = rat(*n.args[0]);
        if (!is_natural(k)) throw Error("phi needs a natural sample count, got " + to_string(k));
        Magnitude m = gaussian_phi(k.get_num().get_ui(), rat(*n.args[1]), rat(*n.args[2]), rat(*n.args[3]),
                                   rat(*n.args[4]));
        if (m.is_rational()) return {true, m.exact_part(), {}};
        return {false, 0, m};
      }
      throw Error("unknown function '" + n.name + "'");
    }
  }
  throw Error("corrupt expression");
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  ExprParser p(text);
  Expr e;
  e.node_ = p.expr();
  if (!p.at_end()) p.fail("trailing input '" + std::string(p.rest()) + "'");
  e.text_ = std::string(text);
  return e;
}

Rational Expr::eval_rational(const ParamEnv& env) const {
  if (!node_) throw Error("empty expression");
  return eval(*node_, env, false).q;
}

Magnitude Expr::eval_magnitude(const ParamEnv& env) const {
  if (!node_) throw Error("empty expression");
  return as_magnitude(eval(*node_, env, true));
}

Condition Condition::parse(std::string_view text) {
  Condition c;
  c.text_ = std::string(text);
  std::string s(text);
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(" and ", start);
    pieces.push_back(s.substr(start, at == std::string::npos ? std::string::npos : at - start));
    if (at == std::string::npos) break;
    start = at + 5;
  }
  for (auto& piece : pieces) {
    bool blank = true;
    for (char ch : piece) blank &= std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (blank) {
      if (pieces.size() == 1) return c;
      throw Error("empty comparison in condition '" + s + "'");
    }
    static const char* ops[] = {"<=", ">=", "==", "!=", "<", ">"};
    bool found = false;
    for (const char* op : ops) {
      auto at = piece.find(op);
      if (at == std::string::npos) continue;
      c.parts_.push_back({Expr::parse(piece.substr(0, at)), op, Expr::parse(piece.substr(at + std::string(op).size()))});
      found = true;
      break;
    }
    if (!found) throw Error("condition '" + piece + "' has no comparison");
  }
  return c;
}

bool Condition::holds(const ParamEnv& env) const {
  for (auto& p : parts_) {
    Rational a = p.lhs.eval_rational(env);
    Rational b = p.rhs.eval_rational(env);
    bool ok = p.op == "<="   ? a <= b
              : p.op == ">=" ? a >= b
              : p.op == "==" ? a == b
              : p.op == "!=" ? a != b
              : p.op == "<"  ? a < b
                             : a > b;
    if (!ok) return false;
  }
  return true;
}

std::vector<std::string> identifier_segments(std::string_view ident) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : ident) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == '_' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string param_literal(const Rational& q) { return to_string(q); }

namespace {

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

std::string instantiate_segment(const std::string& seg, const ParamEnv& env) {
  if (seg.size() >= 2 && seg.front() == '{' && seg.back() == '}')
    return param_literal(Expr::parse(seg.substr(1, seg.size() - 2)).eval_rational(env));
  auto it = env.find(seg);
  if (it != env.end()) return param_literal(it->second);
  return seg;
}

}  // namespace

std::string instantiate_template(std::string_view text, const ParamEnv& env) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (!word_start(c) || (i > 0 && (word_char(text[i - 1]) || text[i - 1] == '_'))) {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(text[j])) ++j;
    while (j < text.size() && text[j] == '_') {
      std::size_t k = j + 1;
      if (k < text.size() && text[k] == '{') {
        int depth = 0;
        while (k < text.size()) {
          if (text[k] == '{') ++depth;
          if (text[k] == '}' && --depth == 0) break;
          ++k;
        }
        if (k >= text.size()) throw Error("unterminated '{' in '" + std::string(text) + "'");
        j = k + 1;
      } else if (k < text.size() && (word_char(text[k]) || text[k] == '-')) {
        if (text[k] == '-') ++k;
        while (k < text.size() && (word_char(text[k]) || text[k] == '/')) ++k;
        j = k;
      } else {
        break;
      }
    }
    std::string word(text.substr(i, j - i));
    auto whole = env.find(word);
    if (whole != env.end()) {
      out += param_literal(whole->second);
    } else {
      auto segs = identifier_segments(word);
      out += segs[0];
      for (std::size_t s = 1; s < segs.size(); ++s) out += "_" + instantiate_segment(segs[s], env);
    }
    i = j;
  }
  return out;
}

}  // namespace gvlam
