#pragma once

#include <string>
#include <vector>

#include "decomp/ast.hpp"
#include "decomp/token.hpp"

namespace decomp::lang {

// Parse a token stream into a validated Program.
// Throws ParseError on syntax problems and SemanticError on duplicate or
// nested defs, recursion, return-arity mismatches, unknown callees, and
// use before definition.
Program parse_tokens(const std::vector<Token>& tokens);

// tokenize + parse_tokens.
Program parse(const std::string& source);

}  // namespace decomp::lang
