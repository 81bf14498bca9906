#include "gvlam/sexpr.hpp"

#include <cctype>

#include "gvlam/error.hpp"

namespace gvlam {

std::optional<std::string> SExpr::head() const {
  if (!is_list() || items.empty() || !items[0].is_atom()) return std::nullopt;
  return items[0].text;
}

const SExpr* SExpr::keyword(const std::string& key) const {
  if (!is_list()) return nullptr;
  for (std::size_t i = 1; i + 1 < items.size(); ++i)
    if (items[i].is_atom() && items[i].text == ":" + key) return &items[i + 1];
  return nullptr;
}

std::vector<const SExpr*> SExpr::positional() const {
  std::vector<const SExpr*> out;
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].is_atom() && !items[i].text.empty() && items[i].text[0] == ':') {
      ++i;
      continue;
    }
    out.push_back(&items[i]);
  }
  return out;
}

SExpr SExpr::make_atom(std::string s) {
  SExpr e;
  e.text = std::move(s);
  return e;
}
SExpr SExpr::make_string(std::string s) {
  SExpr e;
  e.kind = Kind::string;
  e.text = std::move(s);
  return e;
}
SExpr SExpr::make_list(std::vector<SExpr> items) {
  SExpr e;
  e.kind = Kind::list;
  e.items = std::move(items);
  return e;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip();
    while (p_ < s_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (s_[p_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++p_;
  }

  void skip() {
    while (p_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[p_]))) {
        advance();
      } else if (s_[p_] == ';') {
        while (p_ < s_.size() && s_[p_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of input");
    std::size_t line = line_, col = col_;
    SExpr e;
    char c = s_[p_];
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::list;
      while (true) {
        skip();
        if (p_ >= s_.size()) fail("unclosed '(' opened at " + std::to_string(line) + ":" + std::to_string(col));
        if (s_[p_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
    } else if (c == ')') {
      fail("unexpected ')'");
    } else if (c == '"') {
      advance();
      e.kind = SExpr::Kind::string;
      while (true) {
        if (p_ >= s_.size()) fail("unterminated string");
        char d = s_[p_];
        if (d == '"') {
          advance();
          break;
        }
        if (d == '\\') {
          advance();
          if (p_ >= s_.size()) fail("unterminated string");
          d = s_[p_];
          if (d == 'n') d = '\n';
        }
        e.text += d;
        advance();
      }
    } else {
      while (p_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[p_])) && s_[p_] != '(' && s_[p_] != ')' &&
             s_[p_] != '"' && s_[p_] != ';') {
        e.text += s_[p_];
        advance();
      }
    }
    e.line = line;
    e.column = col;
    return e;
  }

  std::string_view s_;
  std::size_t p_ = 0;
  std::size_t line_ = 1, col_ = 1;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) throw ParseError("expected exactly one expression, found " + std::to_string(all.size()), 1, 1);
  return all[0];
}

std::string to_string(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::atom: return e.text;
    case SExpr::Kind::string: return quote(e.text);
    case SExpr::Kind::list: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.items.size(); ++i) out += (i ? " " : "") + to_string(e.items[i]);
      return out + ")";
    }
  }
  return "";
}

std::string pretty(const SExpr& e, int indent) {
  if (!e.is_list()) return to_string(e);
  bool nested = false;
  for (std::size_t i = 1; i < e.items.size(); ++i)
    if (e.items[i].is_list() && e.items[i].head() && !(e.items[i - 1].is_atom() && e.items[i - 1].text.starts_with(":")))
      nested = true;
  if (!nested) return to_string(e);
  std::string out = "(";
  std::string pad(indent + 2, ' ');
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    const SExpr& it = e.items[i];
    bool keyval = i > 0 && e.items[i - 1].is_atom() && e.items[i - 1].text.starts_with(":");
    if (i == 0) {
      out += to_string(it);
    } else if (it.is_list() && it.head() && !keyval) {
      out += "\n" + pad + pretty(it, indent + 2);
    } else {
      out += " " + to_string(it);
    }
  }
  return out + ")";
}

}  // namespace gvlam
