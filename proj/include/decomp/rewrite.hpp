#pragma once

#include <functional>
#include <string>

#include "decomp/ast.hpp"

namespace decomp::lang {

using NameMapper = std::function<std::string(const std::string&)>;

// Rename every variable occurrence (reads, assignment targets, loop vars)
// in place. Function call names are left untouched.
void rename_variables(Expr& expr, const NameMapper& mapper);
void rename_variables(Stmt& stmt, const NameMapper& mapper);

// Recompute used_vars/defined_vars/contains_print from the block's current
// clauses. Must be called after any structural edit of a CompoundStmt.
void recompute_block_summary(CompoundStmt& block);

}  // namespace decomp::lang
