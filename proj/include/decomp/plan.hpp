#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decomp/coloring.hpp"
#include "decomp/ddg.hpp"
#include "decomp/duplicates.hpp"

namespace decomp::split {

enum class Rationale { Subtask, Shared, DuplicationCollapse, DataProcessing, ComplexComputation };
const char* rationale_name(Rationale rationale);

// A call statement synthesized by plan refinement.
struct CallStmt {
    std::string function;
    std::vector<std::string> args;
    std::vector<std::string> captures;        // empty: bare call
    bool wrapped = false;                     // capture = [lit *] call [op lit]
    lang::BinOp wrap_op = lang::BinOp::Mul;
    std::string wrap_literal;
};

struct BodyItem {
    int node = -1;                 // emit this node's defining statement(s)
    std::optional<CallStmt> call;  // or this call
};

struct PlannedFunction {
    std::string suggested_name;
    ColorId color = -1;  // -1: created by refinement
    Rationale rationale = Rationale::Subtask;
    std::vector<int> statements;  // node ids whose definitions live here
    std::vector<std::string> params;
    std::vector<std::string> returns;
    std::vector<BodyItem> body;
    std::vector<lang::Stmt> literal_body;  // collapse functions: ready-made body
};

struct CrossEdge {
    int from = -1;
    int to = -1;
    std::string datum;
};

struct DecompositionPlan {
    std::vector<PlannedFunction> functions;  // helpers first, then shared, then goal functions
    std::vector<BodyItem> main_body;
    std::vector<CrossEdge> cross_edges;
    std::vector<std::string> conflicts;  // skipped refinements, with reasons

    ddg::Ddg graph;  // the graph the plan was derived from
    std::map<std::pair<int, std::string>, std::string> value_names;  // (node, var) -> emitted name

    const std::string& name_of(int node, const std::string& var) const {
        return value_names.at({node, var});
    }
};

// Turn a coloring into callable functions: cross-color data become
// parameters and returns, main orchestrates calls in topological color
// order, names derive from printed variables and shared roots.
DecompositionPlan derive_plan(const ddg::Ddg& graph, const Coloring& coloring,
                              const lang::Program& program);

// Collapse duplicate groups into single parameterized functions called at
// each former site, and hoist data-processing stages into their own
// functions. Skipped rewrites are reported in plan.conflicts.
DecompositionPlan refine_plan(const DecompositionPlan& plan,
                              const std::vector<DuplicateGroup>& duplicates, const ddg::Ddg& graph);

// Mini-language source implementing the plan; reparses cleanly and inlines
// back to the original canonical form.
std::string emit_refactored_source(const DecompositionPlan& plan, const lang::Program& program);

// {functions:[{name,params,returns,statements,rationale}], main:[...], cross_edges:[...]}
std::string plan_to_json(const DecompositionPlan& plan);

}  // namespace decomp::split
