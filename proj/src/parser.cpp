#include "gvlam/parser.hpp"

#include <cctype>
#include <set>

#include "gvlam/error.hpp"

namespace gvlam {

namespace {

enum class Tok {
  ident,
  number,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  semicolon,
  colon,
  arrow,   // =>
  equals,  // =
  pair,    // (*)
  star,    // *
  lolli,   // -o
  bang,    // !
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  // True when no whitespace separates this token from the previous one.
  bool glued;
};

const std::set<std::string> kKeywords = {"let",     "unit",    "in",   "fn", "promote", "derelict",
                                         "discard", "copy",    "as",   "inf"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool glued = false;
    while (true) {
      bool skipped = skip_space();
      glued = !skipped && !out.empty();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", line, col, false});
        return out;
      }
      char c = src_[pos_];
      auto emit = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(src_.substr(pos_, len)), line, col, glued});
        advance(len);
      };
      if (src_.substr(pos_, 3) == "(*)") {
        emit(Tok::pair, 3);
      } else if (c == '(') {
        emit(Tok::lparen, 1);
      } else if (c == ')') {
        emit(Tok::rparen, 1);
      } else if (c == '[') {
        emit(Tok::lbracket, 1);
      } else if (c == ']') {
        emit(Tok::rbracket, 1);
      } else if (c == ',') {
        emit(Tok::comma, 1);
      } else if (c == ';') {
        emit(Tok::semicolon, 1);
      } else if (c == ':') {
        emit(Tok::colon, 1);
      } else if (src_.substr(pos_, 2) == "=>") {
        emit(Tok::arrow, 2);
      } else if (c == '=') {
        emit(Tok::equals, 1);
      } else if (c == '*') {
        emit(Tok::star, 1);
      } else if (src_.substr(pos_, 2) == "-o" && !(pos_ + 2 < src_.size() && ident_char(src_[pos_ + 2]))) {
        emit(Tok::lolli, 2);
      } else if (c == '!') {
        emit(Tok::bang, 1);
      } else if (digit(c)) {
        std::size_t len = 0;
        while (pos_ + len < src_.size() && digit(src_[pos_ + len])) ++len;
        emit(Tok::number, len);
      } else if (ident_start(c)) {
        emit(Tok::ident, ident_length(pos_));
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }

  // Length of the identifier starting at `p`: letters/digits, then segments
  // "_" followed by a signed rational literal, an alphanumeric word, or a
  // braced expression.
  std::size_t ident_length(std::size_t p) const {
    std::size_t q = p;
    while (q < src_.size() && ident_char(src_[q])) ++q;
    while (q < src_.size() && src_[q] == '_') {
      std::size_t r = q + 1;
      if (r < src_.size() && src_[r] == '{') {
        int depth = 0;
        while (r < src_.size()) {
          if (src_[r] == '{') ++depth;
          if (src_[r] == '}' && --depth == 0) break;
          ++r;
        }
        if (r >= src_.size()) throw ParseError("unterminated '{' in identifier", line_, col_);
        q = r + 1;
        continue;
      }
      if (r < src_.size() && (src_[r] == '-' || digit(src_[r]))) {
        std::size_t s = r + (src_[r] == '-' ? 1 : 0);
        if (s >= src_.size() || !digit(src_[s])) break;
        while (s < src_.size() && digit(src_[s])) ++s;
        if (s + 1 < src_.size() && src_[s] == '/' && digit(src_[s + 1])) {
          ++s;
          while (s < src_.size() && digit(src_[s])) ++s;
        }
        while (s < src_.size() && ident_char(src_[s])) ++s;
        q = s;
        continue;
      }
      if (r < src_.size() && ident_char(src_[r])) {
        while (r < src_.size() && ident_char(src_[r])) ++r;
        q = r;
        continue;
      }
      break;
    }
    return q - p;
  }

 private:
  bool skip_space() {
    bool any = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        any = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Type type() {
    Type left = type_tensor();
    if (accept(Tok::lolli)) return lolli_type(left, type());
    return left;
  }

  Term term() {
    const Token& t = peek();
    if (is_kw(t, "let")) return let_form();
    if (is_kw(t, "fn")) return fn_form();
    if (is_kw(t, "discard")) {
      next();
      Term v = term();
      expect_kw("in");
      return discard(v, term());
    }
    if (is_kw(t, "copy")) return copy_form();
    return pair_form();
  }

  Context context() {
    bool bracketed = accept(Tok::lbracket);
    std::vector<Binding> bs;
    if (!(bracketed && peek().kind == Tok::rbracket) && peek().kind != Tok::end) {
      do {
        std::string name = ident("variable name");
        expect(Tok::colon, "':'");
        bs.push_back({name, type()});
      } while (accept(Tok::comma));
    }
    if (bracketed) expect(Tok::rbracket, "']'");
    try {
      return Context(std::move(bs));
    } catch (const Error& e) {
      throw ParseError(e.what(), toks_[0].line, toks_[0].column);
    }
  }

  void finish() {
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Tok::end ? msg + " (at end of input)" : msg, t.line, t.column);
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) fail("expected " + what + (peek().kind == Tok::end ? "" : ", found '" + peek().text + "'"));
  }
  static bool is_kw(const Token& t, const char* kw) { return t.kind == Tok::ident && t.text == kw; }
  void expect_kw(const char* kw) {
    if (!is_kw(peek(), kw)) fail(std::string("expected '") + kw + "'");
    next();
  }
  std::string ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::ident || kKeywords.count(t.text)) fail("expected " + what);
    next();
    return t.text;
  }
  Grade grade() {
    const Token& t = peek();
    if (t.kind == Tok::number || is_kw(t, "inf")) {
      next();
      try {
        return parse_grade_literal(t.text);
      } catch (const Error& e) {
        throw ParseError(e.what(), t.line, t.column);
      }
    }
    fail("expected a grade literal (natural number or 'inf')");
  }

  Type type_tensor() {
    Type left = type_atom();
    while (accept(Tok::star)) left = tensor_type(left, type_atom());
    return left;
  }

  Type type_atom() {
    const Token& t = peek();
    if (accept(Tok::bang)) {
      Grade r = grade();
      return bang_type(r, type_atom());
    }
    if (accept(Tok::lparen)) {
      Type inner = type();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind == Tok::ident && !kKeywords.count(t.text)) {
      next();
      if (t.text == "I") return unit_type();
      return ground_type(t.text);
    }
    fail("expected a type");
  }

  Term let_form() {
    expect_kw("let");
    if (is_kw(peek(), "unit")) {
      next();
      expect(Tok::equals, "'='");
      Term v = term();
      expect_kw("in");
      return unit_let(v, term());
    }
    std::string x = ident("variable name");
    expect(Tok::pair, "'(*)'");
    std::string y = ident("variable name");
    expect(Tok::equals, "'='");
    Term v = term();
    expect_kw("in");
    Term w = term();
    if (x == y) fail("pattern binds '" + x + "' twice");
    return tensor_let(v, x, y, w);
  }

  Term fn_form() {
    expect_kw("fn");
    std::string x = ident("variable name");
    expect(Tok::colon, "':' (lambda binders need a type)");
    Type a = type();
    expect(Tok::arrow, "'=>'");
    return lambda(x, a, term());
  }

  Term copy_form() {
    expect_kw("copy");
    expect(Tok::lbracket, "'['");
    Grade n = grade();
    expect(Tok::comma, "','");
    Grade m = grade();
    expect(Tok::rbracket, "']'");
    Term v = term();
    expect_kw("as");
    std::string x = ident("variable name");
    expect(Tok::comma, "','");
    std::string y = ident("variable name");
    expect_kw("in");
    Term u = term();
    if (x == y) fail("copy binds '" + x + "' twice");
    return copy(n, m, v, x, y, u);
  }

  Term pair_form() {
    Term left = app_form();
    while (accept(Tok::pair)) left = tensor_pair(left, app_form());
    return left;
  }

  bool starts_prefix(const Token& t) const {
    if (t.kind == Tok::lparen || t.kind == Tok::bang) return true;
    if (t.kind != Tok::ident) return false;
    if (t.text == "unit" || t.text == "derelict" || t.text == "promote") return true;
    return !kKeywords.count(t.text);
  }

  Term app_form() {
    Term head = prefix_form();
    while (starts_prefix(peek())) head = app(head, prefix_form());
    return head;
  }

  Term prefix_form() {
    if (is_kw(peek(), "derelict")) {
      next();
      return derelict(prefix_form());
    }
    return atom();
  }

  Term atom() {
    const Token& t = peek();
    if (accept(Tok::lparen)) {
      Term inner = term();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (accept(Tok::bang)) {
      Grade r = grade();
      if (peek().kind != Tok::lparen) fail("expected '(' after '!" + to_string(r) + "'");
      next();
      Term u = term();
      expect(Tok::rparen, "')'");
      return promote(r, {}, {}, {}, u);
    }
    if (is_kw(t, "unit")) {
      next();
      return star();
    }
    if (is_kw(t, "promote")) return promote_form();
    if (t.kind == Tok::ident && !kKeywords.count(t.text)) {
      next();
      if (peek().kind == Tok::lparen && peek().glued) {
        next();
        std::vector<Term> args;
        if (peek().kind != Tok::rparen) {
          do args.push_back(term());
          while (accept(Tok::comma));
        }
        expect(Tok::rparen, "')'");
        if (args.empty()) fail("operation '" + t.text + "' needs at least one argument");
        return op_app(t.text, std::move(args));
      }
      return var(t.text);
    }
    fail(t.kind == Tok::end ? "expected a term" : "unexpected '" + t.text + "'");
  }

  Term promote_form() {
    expect_kw("promote");
    expect(Tok::lbracket, "'['");
    Grade r = grade();
    expect(Tok::semicolon, "';'");
    std::vector<Grade> gs;
    if (peek().kind != Tok::rbracket) {
      do gs.push_back(grade());
      while (accept(Tok::comma));
    }
    expect(Tok::rbracket, "']'");
    expect(Tok::lparen, "'('");
    std::vector<Term> args;
    if (peek().kind != Tok::semicolon) {
      do args.push_back(term());
      while (accept(Tok::comma));
    }
    expect(Tok::semicolon, "';'");
    std::vector<std::string> xs;
    if (peek().kind != Tok::arrow) {
      do xs.push_back(ident("variable name"));
      while (accept(Tok::comma));
    }
    expect(Tok::arrow, "'=>'");
    Term u = term();
    expect(Tok::rparen, "')'");
    if (gs.size() != args.size() || args.size() != xs.size())
      fail("promote needs as many grades, arguments and binders (" + std::to_string(gs.size()) + ", " +
           std::to_string(args.size()) + ", " + std::to_string(xs.size()) + ")");
    std::set<std::string> seen(xs.begin(), xs.end());
    if (seen.size() != xs.size()) fail("promote binds a variable twice");
    return promote(r, std::move(gs), std::move(args), std::move(xs), u);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Type parse_type(std::string_view text) {
  Parser p(text);
  Type t = p.type();
  p.finish();
  return t;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

Context parse_context(std::string_view text) {
  Parser p(text);
  Context c = p.context();
  p.finish();
  return c;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text[0])) return false;
  try {
    return Lexer(text).ident_length(0) == text.size() && !kKeywords.count(std::string(text));
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace gvlam
