#pragma once

#include <string>

#include "decomp/ast.hpp"

namespace decomp::lang {

// Canonical source text: 4-space indents, minimal parentheses.
// parse(pretty_print(parse(src))) is structurally identical to parse(src).
std::string pretty_print(const Program& program);
std::string print_statement(const Stmt& stmt, int indent = 0);
std::string print_expression(const Expr& expr);

}  // namespace decomp::lang
