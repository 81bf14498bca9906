#pragma once

// Concrete syntax; see docs/grammar.ebnf.

#include <string>
#include <string_view>
#include <vector>

#include "gvlam/syntax.hpp"

namespace gvlam {

Type parse_type(std::string_view text);
Term parse_term(std::string_view text);
// "x : A, y : B", optionally wrapped in [ ]; empty text is the empty context.
Context parse_context(std::string_view text);

// True for identifiers that the lexer would read as one name token.
bool is_identifier(std::string_view text);

}  // namespace gvlam
