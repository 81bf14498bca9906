#pragma once

// Minimal S-expressions for proof scripts: atoms, "strings" and (lists).
// Comments run from ';' to the end of the line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gvlam {

struct SExpr {
  enum class Kind { atom, string, list };
  Kind kind = Kind::atom;
  std::string text;
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_atom() const { return kind == Kind::atom; }
  bool is_string() const { return kind == Kind::string; }
  bool is_list() const { return kind == Kind::list; }
  // Head atom of a non-empty list whose first item is an atom.
  std::optional<std::string> head() const;
  // Value following ":key" in a list, if present.
  const SExpr* keyword(const std::string& key) const;
  // List items that are not the head and not part of a ":key value" pair.
  std::vector<const SExpr*> positional() const;

  static SExpr make_atom(std::string s);
  static SExpr make_string(std::string s);
  static SExpr make_list(std::vector<SExpr> items);
};

std::vector<SExpr> parse_sexprs(std::string_view text);
// Exactly one expression.
SExpr parse_sexpr(std::string_view text);

std::string to_string(const SExpr& e);
// Multi-line rendering: lists whose head is followed by nested lists break lines.
std::string pretty(const SExpr& e, int indent = 0);

}  // namespace gvlam
