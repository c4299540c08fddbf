#include "decomp/ddg.hpp"

#include <algorithm>
#include <deque>

#include "json.hpp"

#include "decomp/pretty.hpp"

namespace decomp::ddg {

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Source: return "source";
        case NodeKind::Computation: return "computation";
        case NodeKind::Goal: return "goal";
    }
    return "?";
}

void Ddg::rebuild_adjacency() {
    preds.assign(nodes.size(), {});
    succs.assign(nodes.size(), {});
    for (const auto& node : nodes) {
        std::set<int> seen;
        for (const auto& read : node.reads) {
            if (seen.insert(read.producer).second) {
                preds[static_cast<size_t>(node.id)].push_back(read.producer);
            }
        }
        if (node.is_phantom_goal()) preds[static_cast<size_t>(node.id)].push_back(node.block_goal_of);
    }
    edges.clear();
    for (const auto& node : nodes) {
        for (int producer : preds[static_cast<size_t>(node.id)]) {
            edges.emplace_back(producer, node.id);
            succs[static_cast<size_t>(producer)].push_back(node.id);
        }
    }
}

namespace {

using lang::BinOp;
using lang::CallExpr;
using lang::Comparison;
using lang::CompoundStmt;
using lang::Expr;
using lang::NumLit;
using lang::StrLit;
using lang::VarRef;

bool is_cast_or_split(const std::string& callee) {
    return callee == "split" || callee == "int" || callee == "float" || callee == "str";
}

void walk_expr(const Expr& expr, const std::function<void(const Expr&)>& fn) {
    fn(expr);
    if (expr.is<lang::BinaryOp>()) {
        for (const auto& o : expr.as<lang::BinaryOp>().operands) walk_expr(o, fn);
    } else if (expr.is<Comparison>()) {
        for (const auto& o : expr.as<Comparison>().operands) walk_expr(o, fn);
    } else if (expr.is<CallExpr>()) {
        for (const auto& a : expr.as<CallExpr>().args) walk_expr(a, fn);
    }
}

bool expr_has_data_processing_call(const Expr& expr) {
    bool found = false;
    walk_expr(expr, [&](const Expr& e) {
        if (e.is<CallExpr>() && is_cast_or_split(e.as<CallExpr>().callee)) found = true;
    });
    return found;
}

int count_operations(const Expr& expr) {
    int n = 0;
    walk_expr(expr, [&](const Expr& e) {
        if (e.is<lang::BinaryOp>() || e.is<Comparison>() || e.is<CallExpr>()) ++n;
    });
    return n;
}

bool expr_has_pow(const Expr& expr) {
    bool found = false;
    walk_expr(expr, [&](const Expr& e) {
        if (e.is<lang::BinaryOp>() && e.as<lang::BinaryOp>().op == BinOp::Pow) found = true;
    });
    return found;
}

// First-write order of variables assigned anywhere inside a block.
void ordered_writes(const std::vector<lang::Stmt>& body, std::vector<std::string>& out,
                    std::set<std::string>& seen) {
    for (const auto& stmt : body) {
        if (stmt.is<lang::AssignStmt>()) {
            for (const auto& t : stmt.as<lang::AssignStmt>().targets) {
                if (seen.insert(t).second) out.push_back(t);
            }
        } else if (stmt.is<CompoundStmt>()) {
            const auto& block = stmt.as<CompoundStmt>();
            if (block.kind == lang::BlockKind::For && seen.insert(block.loop_var).second) {
                out.push_back(block.loop_var);
            }
            ordered_writes(block.body, out, seen);
            for (const auto& clause : block.elifs) ordered_writes(clause.body, out, seen);
            if (block.else_body) ordered_writes(*block.else_body, out, seen);
        }
    }
}

std::vector<std::string> block_outputs(const CompoundStmt& block) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    if (block.kind == lang::BlockKind::For) {
        seen.insert(block.loop_var);
        out.push_back(block.loop_var);
    }
    ordered_writes(block.body, out, seen);
    for (const auto& clause : block.elifs) ordered_writes(clause.body, out, seen);
    if (block.else_body) ordered_writes(*block.else_body, out, seen);
    return out;
}

class Builder {
public:
    explicit Builder(const lang::Program& program) : program_(program) {}

    Ddg run() {
        if (!program_.functions().empty()) {
            throw SemanticError(SourceSpan{},
                                "dependency graph construction requires an undecomposed program");
        }
        int stmt_index = 0;
        for (const auto& item : program_.items) {
            add_statement(item.statement(), stmt_index++);
        }
        graph_.rebuild_adjacency();
        return std::move(graph_);
    }

private:
    const lang::Program& program_;
    Ddg graph_;
    std::map<std::string, ddg::ReadBinding> env_;  // variable -> producing value
    std::map<std::string, int> versions_;  // variable -> SSA version counter
    int input_counter_ = 0;

    DdgNode& at(int id) { return graph_.nodes[static_cast<size_t>(id)]; }

    int fresh_node() {
        DdgNode node;
        node.id = static_cast<int>(graph_.nodes.size());
        graph_.nodes.push_back(std::move(node));
        return graph_.nodes.back().id;
    }

    int make_input_source(const std::string& label, const CallExpr& call, SourceSpan span,
                          int stmt_index) {
        int id = fresh_node();
        DdgNode& node = at(id);
        node.kind = NodeKind::Source;
        node.origin = SourceOrigin::Input;
        node.label = label;
        node.span = span;
        node.stmt_index = stmt_index;
        node.outputs = {label};
        node.input_prompt = call.args.empty() ? "" : call.args[0].as<StrLit>().value;
        return id;
    }

    void define(int node_id, const std::string& var) {
        at(node_id).version = ++versions_[var];
        env_[var] = ddg::ReadBinding{var, node_id, var};
    }

    void bind_reads_in_order(int node_id, const Expr& expr) {
        std::set<std::string> seen;
        for (const auto& read : at(node_id).reads) seen.insert(read.name);
        walk_expr(expr, [&](const Expr& e) {
            if (e.is<VarRef>()) {
                const auto& name = e.as<VarRef>().name;
                if (seen.insert(name).second) {
                    const ddg::ReadBinding& value = env_.at(name);
                    at(node_id).reads.push_back(ddg::ReadBinding{name, value.producer, value.value});
                }
            }
        });
    }

    // Replace embedded input() calls with reads of fresh Source nodes.
    Expr extract_inputs(Expr expr, int stmt_index) {
        rewrite_inputs(expr, stmt_index);
        return expr;
    }

    void rewrite_inputs(Expr& expr, int stmt_index) {
        if (expr.is<CallExpr>()) {
            auto& call = expr.as<CallExpr>();
            if (call.callee == "input") {
                std::string name = "input_" + std::to_string(++input_counter_);
                int id = make_input_source(name, call, expr.span, stmt_index);
                env_[name] = ddg::ReadBinding{name, id, name};
                versions_[name] = 1;
                expr = Expr{VarRef{name}, expr.span};
                return;
            }
            for (auto& a : call.args) rewrite_inputs(a, stmt_index);
        } else if (expr.is<lang::BinaryOp>()) {
            for (auto& o : expr.as<lang::BinaryOp>().operands) rewrite_inputs(o, stmt_index);
        } else if (expr.is<Comparison>()) {
            for (auto& o : expr.as<Comparison>().operands) rewrite_inputs(o, stmt_index);
        }
    }

    void add_statement(const lang::Stmt& stmt, int stmt_index) {
        if (stmt.is<lang::AssignStmt>()) {
            add_assignment(stmt, stmt_index);
        } else if (stmt.is<lang::ExprStmt>()) {
            add_expression(stmt, stmt_index);
        } else if (stmt.is<CompoundStmt>()) {
            add_block(stmt, stmt_index);
        }
        // ReturnStmt cannot appear: the program has no functions.
    }

    void add_assignment(const lang::Stmt& stmt, int stmt_index) {
        const auto& assign = stmt.as<lang::AssignStmt>();
        // All RHS values read pre-statement versions: create nodes first,
        // bind target versions after the whole statement. A pure copy
        // (x = y) defines no node: the target aliases the producing value.
        std::vector<std::pair<int, std::string>> defs;
        std::vector<std::pair<std::string, ddg::ReadBinding>> aliases;
        for (size_t i = 0; i < assign.targets.size(); ++i) {
            const std::string& target = assign.targets[i];
            const Expr& raw = assign.values[i];
            if (raw.is<VarRef>()) {
                ddg::ReadBinding value = env_.at(raw.as<VarRef>().name);
                value.name = target;
                aliases.emplace_back(target, value);
            } else if (raw.is<NumLit>() || raw.is<StrLit>()) {
                int id = fresh_node();
                DdgNode& node = at(id);
                node.kind = NodeKind::Source;
                node.origin = SourceOrigin::Constant;
                node.label = target;
                node.span = stmt.span;
                node.stmt_index = stmt_index;
                node.outputs = {target};
                node.expr = raw;
                defs.emplace_back(id, target);
            } else if (raw.is<CallExpr>() && raw.as<CallExpr>().callee == "input") {
                int id = make_input_source(target, raw.as<CallExpr>(), stmt.span, stmt_index);
                at(id).span = stmt.span;
                defs.emplace_back(id, target);
            } else {
                Expr value = extract_inputs(raw, stmt_index);
                int id = fresh_node();
                DdgNode& node = at(id);
                node.kind = NodeKind::Computation;
                node.label = target;
                node.span = stmt.span;
                node.stmt_index = stmt_index;
                node.outputs = {target};
                node.expr = value;
                bind_reads_in_order(id, value);
                if (expr_has_data_processing_call(value)) at(id).tags.insert("data_processing");
                if (expr_has_pow(value) || count_operations(value) >= 2) {
                    at(id).tags.insert("complex_computation");
                }
                defs.emplace_back(id, target);
            }
        }
        for (const auto& [id, target] : defs) define(id, target);
        for (const auto& [target, value] : aliases) env_[target] = value;
    }

    void add_expression(const lang::Stmt& stmt, int stmt_index) {
        const auto& expr_stmt = stmt.as<lang::ExprStmt>();
        if (expr_stmt.expr.is<CallExpr>() && expr_stmt.expr.as<CallExpr>().callee == "print") {
            const auto& call = expr_stmt.expr.as<CallExpr>();
            std::vector<Expr> args;
            for (const auto& a : call.args) args.push_back(extract_inputs(a, stmt_index));
            int id = fresh_node();
            DdgNode& goal = at(id);
            goal.kind = NodeKind::Goal;
            goal.span = stmt.span;
            goal.stmt_index = stmt_index;
            goal.goal_args = args;
            goal.label = "print";
            if (!call.args.empty() && call.args[0].is<VarRef>()) {
                goal.label = "print(" + call.args[0].as<VarRef>().name + ")";
            }
            for (const auto& a : args) bind_reads_in_order(id, a);
            graph_.goal_order.push_back(id);
            return;
        }
        // A non-print expression statement computes a value nobody consumes;
        // dead_code will report it.
        Expr value = extract_inputs(expr_stmt.expr, stmt_index);
        int id = fresh_node();
        DdgNode& node = at(id);
        node.kind = NodeKind::Computation;
        node.span = stmt.span;
        node.stmt_index = stmt_index;
        node.label = "expr";
        node.expr = value;
        bind_reads_in_order(id, value);
    }

    void add_block(const lang::Stmt& stmt, int stmt_index) {
        const auto& block = stmt.as<CompoundStmt>();
        int id = fresh_node();
        {
            DdgNode& node = at(id);
            node.kind = NodeKind::Computation;
            node.span = stmt.span;
            node.stmt_index = stmt_index;
            node.label = block.kind == lang::BlockKind::If ? "branch" : "loop";
            node.block = block;
            node.outputs = block_outputs(block);
            for (const auto& var : block.used_vars) {
                const ddg::ReadBinding& value = env_.at(var);
                node.reads.push_back(ddg::ReadBinding{var, value.producer, value.value});
            }
        }

        bool consumes_processed = false;
        for (const auto& read : at(id).reads) {
            if (at(read.producer).tags.count("data_processing")) consumes_processed = true;
        }
        bool contains_cast = false;
        lang::for_each_expr(stmt, [&](const Expr& e) {
            if (e.is<CallExpr>() && is_cast_or_split(e.as<CallExpr>().callee)) contains_cast = true;
        });
        if (consumes_processed || contains_cast) at(id).tags.insert("data_processing");

        for (const auto& out : at(id).outputs) {
            ++versions_[out];
            env_[out] = ddg::ReadBinding{out, id, out};
        }

        if (block.contains_print) {
            int goal_id = fresh_node();
            DdgNode& goal = at(goal_id);
            goal.kind = NodeKind::Goal;
            goal.span = stmt.span;
            goal.stmt_index = -1;
            goal.label = "print(" + std::string(lang::block_kind_text(block.kind)) + " block)";
            goal.block_goal_of = id;
            graph_.goal_order.push_back(goal_id);
        }
    }
};

}  // namespace

Ddg build_ddg(const lang::Program& program) {
    Builder builder(program);
    return builder.run();
}

std::vector<int> dead_code(const Ddg& graph) {
    std::vector<bool> live(graph.nodes.size(), false);
    std::deque<int> queue(graph.goal_order.begin(), graph.goal_order.end());
    for (int g : graph.goal_order) live[static_cast<size_t>(g)] = true;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        for (int p : graph.preds[static_cast<size_t>(id)]) {
            if (!live[static_cast<size_t>(p)]) {
                live[static_cast<size_t>(p)] = true;
                queue.push_back(p);
            }
        }
    }
    std::vector<int> dead;
    for (const auto& node : graph.nodes) {
        if (!live[static_cast<size_t>(node.id)]) dead.push_back(node.id);
    }
    return dead;
}

std::string ddg_to_json(const Ddg& graph) {
    nlohmann::json out;
    out["nodes"] = nlohmann::json::array();
    for (const auto& node : graph.nodes) {
        nlohmann::json n;
        n["id"] = node.id;
        n["kind"] = node_kind_name(node.kind);
        n["label"] = node.label;
        n["tags"] = node.tags;
        n["span"] = {{"line", node.span.line}, {"column", node.span.column}, {"length", node.span.length}};
        out["nodes"].push_back(std::move(n));
    }
    out["edges"] = nlohmann::json::array();
    for (const auto& [from, to] : graph.edges) {
        out["edges"].push_back({from, to});
    }
    out["goal_order"] = graph.goal_order;
    return out.dump(2);
}

}  // namespace decomp::ddg
