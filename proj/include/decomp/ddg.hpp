#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "decomp/ast.hpp"
#include "decomp/span.hpp"

namespace decomp::ddg {

enum class NodeKind { Source, Computation, Goal };
enum class SourceOrigin { None, Input, Constant };

const char* node_kind_name(NodeKind kind);

// One read of a value: the variable name as written in this statement, the
// node producing it, and which of that node's outputs it is. Name and value
// differ when the variable was a pure copy of another (copies are aliases,
// not nodes).
struct ReadBinding {
    std::string name;
    int producer = -1;
    std::string value;
};

// One unit of data: an input, a named constant, a computed value (one SSA
// version per assignment; one node per compound block), or a print.
struct DdgNode {
    int id = -1;
    NodeKind kind = NodeKind::Computation;
    SourceOrigin origin = SourceOrigin::None;
    std::string label;
    SourceSpan span;
    std::set<std::string> tags;  // data_processing, complex_computation

    int stmt_index = -1;  // index into the flat program's statements; -1 for synthesized goals

    // Values this node defines, in first-write order (one for assignments,
    // several for compound blocks, none for goals).
    std::vector<std::string> outputs;
    int version = 1;  // SSA version of outputs[0] (single-output nodes)

    // Reads in first-occurrence order.
    std::vector<ReadBinding> reads;

    // Definition payload.
    std::optional<lang::Expr> expr;            // assignment value / constant literal
    std::vector<lang::Expr> goal_args;         // print arguments
    std::optional<lang::CompoundStmt> block;   // compound block body
    std::optional<std::string> input_prompt;   // input() prompt text
    int block_goal_of = -1;                    // synthesized goal: id of the printing block

    bool is_phantom_goal() const { return block_goal_of >= 0; }
    const ReadBinding* binding_of(const std::string& name) const {
        for (const auto& read : reads) {
            if (read.name == name) return &read;
        }
        return nullptr;
    }
    int producer_of(const std::string& name) const {
        const ReadBinding* read = binding_of(name);
        return read ? read->producer : -1;
    }
};

struct Ddg {
    std::vector<DdgNode> nodes;  // id == index; construction order == source order
    std::vector<std::pair<int, int>> edges;  // producer -> consumer, deduplicated
    std::vector<int> goal_order;

    std::vector<std::vector<int>> preds;  // per node, in read order
    std::vector<std::vector<int>> succs;  // per node, in consumer id order

    const DdgNode& node(int id) const { return nodes[static_cast<size_t>(id)]; }
    void rebuild_adjacency();
};

// Build the dependency graph of an undecomposed program (zero user
// functions; run inline_program first otherwise).
Ddg build_ddg(const lang::Program& program);

// Nodes with no path to any goal, in source order.
std::vector<int> dead_code(const Ddg& graph);

// {nodes:[{id,kind,label,tags,span}], edges:[[from,to]], goal_order:[ids]}
std::string ddg_to_json(const Ddg& graph);

}  // namespace decomp::ddg
