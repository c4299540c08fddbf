#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decomp/ddg.hpp"

namespace decomp::split {

// How one member's tree relates to the group's common tree: the member may
// wrap it in a single multiplicative/divisive literal at the root.
struct MemberFit {
    int node = -1;
    bool stripped = false;
    lang::BinOp root_op = lang::BinOp::Mul;  // valid when stripped
    std::string literal_lexeme;              // valid when stripped
    double literal = 1.0;
};

struct DuplicateGroup {
    std::vector<int> nodes;          // member node ids, ascending
    std::vector<MemberFit> fits;     // parallel to nodes
    bool constant_factor = false;    // at least one member carries a root literal
    double factor = 1.0;             // ratio between largest and smallest member
    bool goals = false;              // group of print statements
};

// Maximal groups of statements with identical op trees up to variable
// renaming (alpha) or up to one multiplicative literal at the root
// (constant-factor, e.g. `x // 2` vs `x`). Compound blocks are opaque and
// never grouped; trees without at least one operation only group when
// strictly identical.
std::vector<DuplicateGroup> find_duplicates(const ddg::Ddg& graph);

}  // namespace decomp::split
