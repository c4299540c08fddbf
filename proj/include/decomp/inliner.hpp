#pragma once

#include "decomp/ast.hpp"

namespace decomp::ddg {

// Expand every user-function call into freshly renamed body copies, in
// topological call order, yielding an equivalent zero-function program.
// Argument expressions bind to renamed parameters through inserted
// assignments; captured returns become assignments to the call's targets.
//
// Throws InlineError when a nonzero-arity result is discarded, a capture
// exists for arity 0, a return sits inside a compound block or before the
// end of a body, or a user call appears in a re-evaluated position
// (while/elif conditions).
lang::Program inline_program(const lang::Program& program);

}  // namespace decomp::ddg
