#include "decomp/plan.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "json.hpp"

#include "decomp/pretty.hpp"
#include "decomp/rewrite.hpp"

namespace decomp::split {

using ddg::Ddg;
using ddg::DdgNode;
using ddg::NodeKind;
using ddg::SourceOrigin;
using lang::BinOp;
using lang::CallExpr;
using lang::Expr;
using lang::NumLit;
using lang::Stmt;
using lang::StrLit;
using lang::VarRef;

const char* rationale_name(Rationale rationale) {
    switch (rationale) {
        case Rationale::Subtask: return "subtask";
        case Rationale::Shared: return "shared";
        case Rationale::DuplicationCollapse: return "duplication_collapse";
        case Rationale::DataProcessing: return "data_processing";
        case Rationale::ComplexComputation: return "complex_computation";
    }
    return "?";
}

namespace {

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {"def",  "return", "if",  "elif", "else",
                                                "while", "for",    "in"};
    return words;
}

std::string sanitize_identifier(std::string name) {
    std::string out;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out += c;
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "f_" + out;
    if (reserved_words().count(out) || lang::is_builtin(out)) out += "_fn";
    return out;
}

// --- statement regeneration -------------------------------------------------

// Emit the defining statement(s) of a node using plan value names.
void append_node_statements(const DecompositionPlan& plan, int node_id, int indent,
                            std::ostringstream& out) {
    const DdgNode& node = plan.graph.node(node_id);
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    if (node.kind == NodeKind::Goal) {
        if (node.is_phantom_goal()) return;  // prints happen inside its block
        std::vector<Expr> args = node.goal_args;
        for (auto& a : args) {
            lang::rename_variables(a, [&](const std::string& name) {
                const ddg::ReadBinding* read = node.binding_of(name);
                return read ? plan.name_of(read->producer, read->value) : name;
            });
        }
        out << pad << "print(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out << ", ";
            out << lang::print_expression(args[i]);
        }
        out << ")\n";
        return;
    }
    if (node.kind == NodeKind::Source && node.origin == SourceOrigin::Input) {
        out << pad << plan.name_of(node.id, node.outputs[0]) << " = input(";
        if (node.input_prompt && !node.input_prompt->empty()) {
            Expr prompt{StrLit{*node.input_prompt}, node.span};
            out << lang::print_expression(prompt);
        }
        out << ")\n";
        return;
    }
    if (node.block) {
        lang::CompoundStmt block = *node.block;
        // A variable that is both read and written must keep one textual
        // name through the block; seed it from the incoming value first.
        std::map<std::string, std::string> rename;
        for (const auto& read : node.reads) {
            rename[read.name] = plan.name_of(read.producer, read.value);
        }
        for (const auto& var : node.outputs) {
            std::string out_name = plan.name_of(node.id, var);
            auto it = rename.find(var);
            if (it != rename.end() && it->second != out_name) {
                out << pad << out_name << " = " << it->second << "\n";
            }
            rename[var] = out_name;
        }
        Stmt wrapped{std::move(block), node.span};
        lang::rename_variables(wrapped, [&](const std::string& name) {
            auto it = rename.find(name);
            return it == rename.end() ? name : it->second;
        });
        out << lang::print_statement(wrapped, indent);
        return;
    }
    // Constant source or expression computation.
    Expr value = *node.expr;
    lang::rename_variables(value, [&](const std::string& name) {
        const ddg::ReadBinding* read = node.binding_of(name);
        return read ? plan.name_of(read->producer, read->value) : name;
    });
    if (node.outputs.empty()) {
        // Bare expression statement (dead, kept for faithfulness).
        out << pad << lang::print_expression(value) << "\n";
        return;
    }
    out << pad << plan.name_of(node.id, node.outputs[0]);
    out << " = " << lang::print_expression(value) << "\n";
}

void append_call_statement(const CallStmt& call, int indent, std::ostringstream& out) {
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    out << pad;
    for (size_t i = 0; i < call.captures.size(); ++i) {
        if (i) out << ", ";
        out << call.captures[i];
    }
    if (!call.captures.empty()) out << " = ";
    std::string invocation = call.function + "(";
    for (size_t i = 0; i < call.args.size(); ++i) {
        if (i) invocation += ", ";
        invocation += call.args[i];
    }
    invocation += ")";
    if (call.wrapped) {
        if (call.wrap_op == BinOp::Mul) {
            invocation = call.wrap_literal + " * " + invocation;
        } else {
            invocation += std::string(" ") + lang::bin_op_text(call.wrap_op) + " " + call.wrap_literal;
        }
    }
    out << invocation << "\n";
}

std::string body_item_text(const DecompositionPlan& plan, const BodyItem& item) {
    std::ostringstream out;
    if (item.call) {
        append_call_statement(*item.call, 0, out);
    } else {
        append_node_statements(plan, item.node, 0, out);
    }
    std::string text = out.str();
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

// --- derive_plan -------------------------------------------------------------

class Deriver {
public:
    Deriver(const Ddg& graph, const Coloring& coloring) : graph_(graph), coloring_(coloring) {
        used_function_names_.insert("main");  // reserved for the orchestrator
    }

    DecompositionPlan run() {
        plan_.graph = graph_;
        assign_value_names();
        collect_cross_edges();
        build_functions();
        schedule_main();
        return std::move(plan_);
    }

private:
    const Ddg& graph_;
    const Coloring& coloring_;
    DecompositionPlan plan_;
    std::set<std::string> used_value_names_;
    std::set<std::string> used_function_names_;
    std::map<ColorId, size_t> function_of_color_;
    std::map<ColorId, ColorId> phantom_host_;  // phantom goal color -> color holding its block

    void assign_value_names() {
        for (const auto& node : graph_.nodes) {
            for (const auto& var : node.outputs) used_value_names_.insert(var);
        }
        std::map<std::string, int> occurrence;
        for (const auto& node : graph_.nodes) {
            for (const auto& var : node.outputs) {
                int n = ++occurrence[var];
                std::string name = var;
                if (n > 1) {
                    int suffix = n;
                    do {
                        name = var + "_v" + std::to_string(suffix++);
                    } while (used_value_names_.count(name));
                    used_value_names_.insert(name);
                }
                plan_.value_names[{node.id, var}] = name;
            }
        }
    }

    void collect_cross_edges() {
        for (const auto& node : graph_.nodes) {
            for (const auto& read : node.reads) {
                if (coloring_.color_of(read.producer) != coloring_.color_of(node.id)) {
                    plan_.cross_edges.push_back(CrossEdge{read.producer, node.id,
                                                          plan_.name_of(read.producer, read.value)});
                }
            }
        }
    }

    std::string unique_function_name(std::string base) {
        base = sanitize_identifier(base);
        std::string name = base;
        int suffix = 1;
        while (used_function_names_.count(name)) {
            name = base + "_" + std::to_string(++suffix);
        }
        used_function_names_.insert(name);
        return name;
    }

    std::vector<int> color_nodes(ColorId c) const {
        std::vector<int> out;
        for (const auto& node : graph_.nodes) {
            if (coloring_.color_of(node.id) == c) out.push_back(node.id);
        }
        return out;
    }

    std::vector<std::string> params_of(const std::vector<int>& nodes, ColorId c) const {
        std::vector<std::string> params;
        std::set<std::string> seen;
        for (int id : nodes) {
            for (const auto& read : graph_.node(id).reads) {
                if (coloring_.color_of(read.producer) == c) continue;
                const std::string& datum = plan_.name_of(read.producer, read.value);
                if (seen.insert(datum).second) params.push_back(datum);
            }
        }
        return params;
    }

    std::vector<std::string> returns_of(const std::vector<int>& nodes, ColorId c) const {
        std::vector<std::string> returns;
        std::set<std::string> seen;
        for (int id : nodes) {
            for (int consumer : graph_.succs[static_cast<size_t>(id)]) {
                if (coloring_.color_of(consumer) == c) continue;
                for (const auto& read : graph_.node(consumer).reads) {
                    if (read.producer != id) continue;
                    const std::string& datum = plan_.name_of(id, read.value);
                    if (seen.insert(datum).second) returns.push_back(datum);
                }
            }
        }
        return returns;
    }

    std::string goal_function_base_name(ColorId c, const std::vector<int>& nodes) const {
        int goal = coloring_.goal_of.at(c);
        const DdgNode& node = graph_.node(goal);
        if (!node.goal_args.empty() && node.goal_args[0].is<VarRef>()) {
            return node.goal_args[0].as<VarRef>().name;
        }
        if (node.is_phantom_goal()) {
            return graph_.node(node.block_goal_of).label;
        }
        (void)nodes;
        return "output";
    }

    void build_functions() {
        // Shared functions first (mint order), then goal functions
        // (goal order); refinement may prepend helpers later.
        std::vector<ColorId> order = coloring_.shared_colors;
        for (ColorId c : coloring_.goal_colors) order.push_back(c);
        for (ColorId c : order) {
            std::vector<int> nodes = color_nodes(c);
            bool phantom_only = true;
            for (int id : nodes) {
                const DdgNode& node = graph_.node(id);
                if (!(node.kind == NodeKind::Goal && node.is_phantom_goal())) phantom_only = false;
            }
            if (phantom_only) {
                // The color owns no statements: its print runs inside the
                // function holding the block. Main must still schedule it
                // at this goal's slot.
                int goal = coloring_.goal_of.at(c);
                int block = graph_.node(goal).block_goal_of;
                phantom_host_[c] = coloring_.color_of(block);
                continue;
            }
            PlannedFunction fn;
            fn.color = c;
            fn.statements = nodes;
            fn.params = params_of(nodes, c);
            fn.returns = returns_of(nodes, c);
            if (coloring_.is_shared(c)) {
                fn.rationale = Rationale::Shared;
                fn.suggested_name =
                    unique_function_name(graph_.node(coloring_.shared_root.at(c)).label);
            } else {
                fn.rationale = Rationale::Subtask;
                fn.suggested_name = unique_function_name(goal_function_base_name(c, nodes));
            }
            for (int id : nodes) {
                const DdgNode& node = graph_.node(id);
                if (node.kind == NodeKind::Goal && node.is_phantom_goal()) continue;
                fn.body.push_back(BodyItem{id, std::nullopt});
            }
            function_of_color_[c] = plan_.functions.size();
            plan_.functions.push_back(std::move(fn));
        }
    }

    void schedule_main() {
        std::vector<int> main_nodes = color_nodes(kMainColor);
        std::set<std::string> available;
        std::set<ColorId> called;
        size_t next_main = 0;

        auto node_ready = [&](int id) {
            for (const auto& read : graph_.node(id).reads) {
                if (!available.count(plan_.name_of(read.producer, read.value))) return false;
            }
            return true;
        };
        auto flush_main = [&]() {
            while (next_main < main_nodes.size() && node_ready(main_nodes[next_main])) {
                int id = main_nodes[next_main++];
                plan_.main_body.push_back(BodyItem{id, std::nullopt});
                for (const auto& var : graph_.node(id).outputs) {
                    available.insert(plan_.name_of(id, var));
                }
            }
        };

        std::function<void(ColorId)> ensure_color = [&](ColorId c) {
            if (c == kMainColor || called.count(c)) return;
            called.insert(c);
            const PlannedFunction& fn = plan_.functions[function_of_color_.at(c)];
            // Producers of this function's parameters come first.
            for (int id : fn.statements) {
                for (const auto& read : graph_.node(id).reads) {
                    ColorId pc = coloring_.color_of(read.producer);
                    if (pc != kMainColor && pc != c) ensure_color(pc);
                }
            }
            flush_main();
            CallStmt call;
            call.function = fn.suggested_name;
            call.args = fn.params;
            call.captures = fn.returns;
            plan_.main_body.push_back(BodyItem{-1, call});
            for (const auto& r : fn.returns) available.insert(r);
        };

        flush_main();
        for (ColorId c : coloring_.goal_colors) {
            auto host = phantom_host_.find(c);
            ensure_color(host == phantom_host_.end() ? c : host->second);
            flush_main();
        }
        // Dead tail readers.
        flush_main();
        while (next_main < main_nodes.size()) {
            plan_.main_body.push_back(BodyItem{main_nodes[next_main++], std::nullopt});
        }
    }
};

}  // namespace

DecompositionPlan derive_plan(const Ddg& graph, const Coloring& coloring,
                              const lang::Program& program) {
    (void)program;
    Deriver deriver(graph, coloring);
    return deriver.run();
}

// --- refine_plan --------------------------------------------------------------

namespace {

struct BodyLocation {
    size_t function;
    size_t position;
};

// Distinct leaf values of an expression in first-occurrence order. Two
// names bound to the same produced value count as one leaf, mirroring how
// duplicate detection abstracts trees.
std::vector<ddg::ReadBinding> leaf_bindings(const Expr& expr, const DdgNode& node) {
    std::vector<ddg::ReadBinding> out;
    std::set<std::pair<int, std::string>> seen;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        if (e.is<VarRef>()) {
            const auto& name = e.as<VarRef>().name;
            const ddg::ReadBinding* read = node.binding_of(name);
            ddg::ReadBinding leaf = read ? *read : ddg::ReadBinding{name, -1, name};
            if (seen.insert({leaf.producer, leaf.value}).second) out.push_back(leaf);
        } else if (e.is<lang::BinaryOp>()) {
            for (const auto& o : e.as<lang::BinaryOp>().operands) walk(o);
        } else if (e.is<lang::Comparison>()) {
            for (const auto& o : e.as<lang::Comparison>().operands) walk(o);
        } else if (e.is<CallExpr>()) {
            for (const auto& a : e.as<CallExpr>().args) walk(a);
        }
    };
    walk(expr);
    return out;
}

const Expr& member_tree(const DdgNode& node, const MemberFit& fit, Expr& goal_storage) {
    if (node.kind == NodeKind::Goal) {
        goal_storage = Expr{CallExpr{"print", node.goal_args}, node.span};
        return goal_storage;
    }
    if (!fit.stripped) return *node.expr;
    const auto& bin = node.expr->as<lang::BinaryOp>();
    if (fit.root_op == BinOp::Mul) {
        return bin.operands[bin.operands[0].is<NumLit>() ? 1 : 0];
    }
    return bin.operands[0];
}

// Common name shared by member labels ("circle_plants"/"semi_plants" ->
// "plants", "area1"/"area2" -> "area"), else the first label.
std::string common_label(const std::vector<std::string>& labels) {
    if (labels.empty()) return "helper";
    auto tokens = [](const std::string& label) {
        std::vector<std::string> out;
        std::string current;
        for (char c : label) {
            if (c == '_') {
                if (!current.empty()) out.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        if (!current.empty()) out.push_back(current);
        for (auto& tok : out) {
            while (tok.size() > 1 && std::isdigit(static_cast<unsigned char>(tok.back()))) {
                tok.pop_back();
            }
        }
        return out;
    };
    std::vector<std::string> shared = tokens(labels[0]);
    for (size_t i = 1; i < labels.size(); ++i) {
        std::vector<std::string> t = tokens(labels[i]);
        std::vector<std::string> kept;
        for (const auto& tok : shared) {
            if (std::find(t.begin(), t.end(), tok) != t.end()) kept.push_back(tok);
        }
        shared = kept;
    }
    if (shared.empty()) return labels[0];
    std::string out;
    for (const auto& tok : shared) {
        if (!out.empty()) out += "_";
        out += tok;
    }
    return out;
}

class Refiner {
public:
    Refiner(const DecompositionPlan& plan, const std::vector<DuplicateGroup>& duplicates,
            const Ddg& graph)
        : plan_(plan), duplicates_(duplicates), graph_(graph) {
        used_function_names_.insert("main");
        for (const auto& fn : plan_.functions) used_function_names_.insert(fn.suggested_name);
    }

    DecompositionPlan run() {
        index_bodies();
        for (const auto& group : duplicates_) collapse_group(group);
        hoist_data_processing();
        std::vector<PlannedFunction> ordered = std::move(helpers_);
        for (auto& fn : plan_.functions) ordered.push_back(std::move(fn));
        plan_.functions = std::move(ordered);
        return std::move(plan_);
    }

private:
    DecompositionPlan plan_;
    const std::vector<DuplicateGroup>& duplicates_;
    const Ddg& graph_;
    std::vector<PlannedFunction> helpers_;
    std::set<std::string> used_function_names_;
    std::map<int, BodyLocation> location_;  // node id -> body slot

    void index_bodies() {
        location_.clear();
        for (size_t f = 0; f < plan_.functions.size(); ++f) {
            for (size_t p = 0; p < plan_.functions[f].body.size(); ++p) {
                const BodyItem& item = plan_.functions[f].body[p];
                if (!item.call && item.node >= 0) location_[item.node] = BodyLocation{f, p};
            }
        }
    }

    std::string unique_function_name(std::string base) {
        base = sanitize_identifier(base);
        std::string name = base;
        int suffix = 1;
        while (used_function_names_.count(name)) {
            name = base + "_" + std::to_string(++suffix);
        }
        used_function_names_.insert(name);
        return name;
    }

    void collapse_group(const DuplicateGroup& group) {
        // Every member must still be a plain node statement in some body.
        std::vector<BodyLocation> spots;
        for (int node : group.nodes) {
            auto it = location_.find(node);
            if (it == location_.end()) {
                plan_.conflicts.push_back("duplicate group at node " + std::to_string(node) +
                                          " skipped: member not in any function body");
                return;
            }
            spots.push_back(it->second);
        }

        const DdgNode& first = graph_.node(group.nodes[0]);
        Expr goal_storage{VarRef{""}, {}};
        const Expr& common = member_tree(first, group.fits[0], goal_storage);
        auto common_leaves = leaf_bindings(common, first);

        // Parameter names from the first member's leaf variables.
        std::vector<std::string> params;
        std::set<std::string> taken;
        for (const auto& read : common_leaves) {
            std::string base = read.name;
            std::string name = base;
            int n = 1;
            while (taken.count(name)) name = base + "_" + std::to_string(++n);
            taken.insert(name);
            params.push_back(name);
        }

        // All call sites are planned before any body is touched, so a
        // mismatch never leaves a dangling call behind.
        std::vector<CallStmt> calls;
        for (size_t m = 0; m < group.nodes.size(); ++m) {
            const DdgNode& node = graph_.node(group.nodes[m]);
            Expr storage{VarRef{""}, {}};
            const Expr& tree = member_tree(node, group.fits[m], storage);
            auto leaves = leaf_bindings(tree, node);
            if (leaves.size() != common_leaves.size()) {
                plan_.conflicts.push_back("duplicate group at node " + std::to_string(node.id) +
                                          " skipped: leaf mismatch");
                return;
            }
            CallStmt call;
            for (const auto& read : leaves) {
                call.args.push_back(read.producer >= 0 ? plan_.name_of(read.producer, read.value)
                                                       : read.name);
            }
            if (!group.goals) {
                call.captures.push_back(plan_.name_of(node.id, node.outputs[0]));
                if (group.fits[m].stripped) {
                    call.wrapped = true;
                    call.wrap_op = group.fits[m].root_op;
                    call.wrap_literal = group.fits[m].literal_lexeme;
                }
            }
            calls.push_back(std::move(call));
        }

        PlannedFunction helper;
        helper.color = -1;
        helper.rationale = Rationale::DuplicationCollapse;
        helper.statements = {group.nodes[0]};
        helper.params = params;

        // Body: the common tree over parameter names, substituted by leaf
        // value so every spelling of one value maps to the same parameter.
        std::map<std::pair<int, std::string>, std::string> to_param;
        for (size_t i = 0; i < common_leaves.size(); ++i) {
            to_param[{common_leaves[i].producer, common_leaves[i].value}] = params[i];
        }
        Expr body_expr = common;
        lang::rename_variables(body_expr, [&](const std::string& name) {
            const ddg::ReadBinding* read = first.binding_of(name);
            auto it = to_param.find(read ? std::make_pair(read->producer, read->value)
                                         : std::make_pair(-1, name));
            return it == to_param.end() ? name : it->second;
        });

        std::vector<std::string> labels;
        for (int node : group.nodes) labels.push_back(graph_.node(node).label);
        if (group.goals) {
            helper.suggested_name = unique_function_name("show_row");
            lang::ExprStmt print_stmt{body_expr};
            helper.literal_body.push_back(Stmt{std::move(print_stmt), first.span});
        } else {
            helper.suggested_name = unique_function_name(common_label(labels));
            lang::ReturnStmt ret;
            ret.values.push_back(std::move(body_expr));
            std::string result = "value";
            while (taken.count(result)) result = "result_" + result;
            helper.returns = {result};
            helper.literal_body.push_back(Stmt{std::move(ret), first.span});
        }

        for (size_t m = 0; m < group.nodes.size(); ++m) {
            const DdgNode& node = graph_.node(group.nodes[m]);
            calls[m].function = helper.suggested_name;
            PlannedFunction& owner = plan_.functions[spots[m].function];
            owner.body[spots[m].position] = BodyItem{-1, std::move(calls[m])};
            owner.statements.erase(
                std::remove(owner.statements.begin(), owner.statements.end(), node.id),
                owner.statements.end());
            location_.erase(node.id);
        }
        helpers_.push_back(std::move(helper));
    }

    // --- data-processing hoists -------------------------------------------

    void hoist_data_processing() {
        size_t original_count = plan_.functions.size();
        for (size_t f = 0; f < original_count; ++f) {
            hoist_in_function(f);
        }
    }

    void hoist_in_function(size_t f) {
        PlannedFunction& fn = plan_.functions[f];
        std::vector<int> tagged;
        for (const auto& item : fn.body) {
            if (item.call || item.node < 0) continue;
            const DdgNode& node = graph_.node(item.node);
            if (node.kind != NodeKind::Computation) continue;
            if (node.tags.count("data_processing")) tagged.push_back(item.node);
        }
        if (tagged.empty()) return;

        // Components over direct edges within the tagged set.
        std::map<int, int> component;
        int next_component = 0;
        for (int id : tagged) component[id] = next_component++;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int id : tagged) {
                for (const auto& read : graph_.node(id).reads) {
                    int producer = read.producer;
                    if (component.count(producer) && component[producer] != component[id]) {
                        int from = std::max(component[producer], component[id]);
                        int to = std::min(component[producer], component[id]);
                        for (auto& [n, c] : component) {
                            if (c == from) c = to;
                        }
                        changed = true;
                    }
                }
            }
        }
        std::map<int, std::vector<int>> groups;
        for (int id : tagged) groups[component[id]].push_back(id);

        size_t plain_nodes = 0;
        for (const auto& item : fn.body) {
            if (!item.call && item.node >= 0 &&
                graph_.node(item.node).kind != NodeKind::Goal) {
                ++plain_nodes;
            }
        }

        for (auto& [c, members] : groups) {
            std::sort(members.begin(), members.end());
            if (members.size() == plain_nodes) continue;  // already its own stage
            hoist_component(f, members);
        }
    }

    void hoist_component(size_t f, const std::vector<int>& members) {
        PlannedFunction& fn = plan_.functions[f];
        std::set<int> member_set(members.begin(), members.end());

        size_t first_pos = fn.body.size();
        for (size_t p = 0; p < fn.body.size(); ++p) {
            if (!fn.body[p].call && member_set.count(fn.body[p].node)) {
                first_pos = std::min(first_pos, p);
            }
        }
        if (first_pos == fn.body.size()) return;

        // All external inputs must already exist at the call position.
        for (int id : members) {
            for (const auto& read : graph_.node(id).reads) {
                if (member_set.count(read.producer)) continue;
                auto at = location_.find(read.producer);
                if (at != location_.end() && at->second.function == f &&
                    at->second.position > first_pos) {
                    plan_.conflicts.push_back(
                        "data-processing hoist skipped in '" + fn.suggested_name +
                        "': stage input computed between its statements");
                    return;
                }
            }
        }

        PlannedFunction helper;
        helper.color = -1;
        helper.rationale = Rationale::DataProcessing;
        helper.statements = members;

        std::set<std::string> seen_params;
        for (int id : members) {
            for (const auto& read : graph_.node(id).reads) {
                if (member_set.count(read.producer)) continue;
                const std::string& datum = plan_.name_of(read.producer, read.value);
                if (seen_params.insert(datum).second) helper.params.push_back(datum);
            }
        }
        std::set<std::string> seen_returns;
        for (int id : members) {
            for (int consumer : graph_.succs[static_cast<size_t>(id)]) {
                if (member_set.count(consumer)) continue;
                for (const auto& read : graph_.node(consumer).reads) {
                    if (read.producer != id) continue;
                    const std::string& datum = plan_.name_of(id, read.value);
                    if (seen_returns.insert(datum).second) helper.returns.push_back(datum);
                }
            }
        }
        for (int id : members) helper.body.push_back(BodyItem{id, std::nullopt});

        // Name the stage after what it produces for the rest of the code.
        const DdgNode& head = graph_.node(members[0]);
        std::string base = head.outputs.empty() ? head.label : head.outputs[0];
        for (int id : members) {
            bool found = false;
            for (int consumer : graph_.succs[static_cast<size_t>(id)]) {
                if (member_set.count(consumer)) continue;
                for (const auto& read : graph_.node(consumer).reads) {
                    if (read.producer == id) {
                        base = read.value;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        helper.suggested_name = unique_function_name("process_" + base);

        CallStmt call;
        call.function = helper.suggested_name;
        call.args = helper.params;
        call.captures = helper.returns;

        std::vector<BodyItem> new_body;
        for (size_t p = 0; p < fn.body.size(); ++p) {
            if (p == first_pos) {
                new_body.push_back(BodyItem{-1, call});
                continue;
            }
            const BodyItem& item = fn.body[p];
            if (!item.call && member_set.count(item.node)) continue;
            new_body.push_back(item);
        }
        fn.body = std::move(new_body);
        for (int id : members) {
            fn.statements.erase(std::remove(fn.statements.begin(), fn.statements.end(), id),
                                fn.statements.end());
            location_.erase(id);
        }
        helpers_.push_back(std::move(helper));
        index_bodies();
    }
};

}  // namespace

DecompositionPlan refine_plan(const DecompositionPlan& plan,
                              const std::vector<DuplicateGroup>& duplicates, const Ddg& graph) {
    Refiner refiner(plan, duplicates, graph);
    return refiner.run();
}

// --- emission ------------------------------------------------------------------

std::string emit_refactored_source(const DecompositionPlan& plan, const lang::Program& program) {
    (void)program;
    std::ostringstream out;
    for (const auto& fn : plan.functions) {
        out << "def " << fn.suggested_name << "(";
        for (size_t i = 0; i < fn.params.size(); ++i) {
            if (i) out << ", ";
            out << fn.params[i];
        }
        out << "):\n";
        if (!fn.literal_body.empty()) {
            for (const auto& stmt : fn.literal_body) {
                out << lang::print_statement(stmt, 1);
            }
        } else {
            for (const auto& item : fn.body) {
                if (item.call) {
                    append_call_statement(*item.call, 1, out);
                } else {
                    append_node_statements(plan, item.node, 1, out);
                }
            }
            if (!fn.returns.empty()) {
                out << "    return ";
                for (size_t i = 0; i < fn.returns.size(); ++i) {
                    if (i) out << ", ";
                    out << fn.returns[i];
                }
                out << "\n";
            }
        }
        out << "\n";
    }
    out << "def main():\n";
    for (const auto& item : plan.main_body) {
        if (item.call) {
            append_call_statement(*item.call, 1, out);
        } else {
            append_node_statements(plan, item.node, 1, out);
        }
    }
    if (plan.main_body.empty()) out << "    return\n";
    out << "\nmain()\n";
    return out.str();
}

std::string plan_to_json(const DecompositionPlan& plan) {
    nlohmann::json out;
    out["functions"] = nlohmann::json::array();
    for (const auto& fn : plan.functions) {
        nlohmann::json j;
        j["name"] = fn.suggested_name;
        j["params"] = fn.params;
        j["returns"] = fn.returns;
        j["statements"] = fn.statements;
        j["rationale"] = rationale_name(fn.rationale);
        if (fn.color >= 0) j["color"] = fn.color;
        out["functions"].push_back(std::move(j));
    }
    out["main"] = nlohmann::json::array();
    for (const auto& item : plan.main_body) {
        out["main"].push_back(body_item_text(plan, item));
    }
    out["cross_edges"] = nlohmann::json::array();
    for (const auto& edge : plan.cross_edges) {
        out["cross_edges"].push_back({{"from", edge.from}, {"to", edge.to}, {"carries", edge.datum}});
    }
    if (!plan.conflicts.empty()) out["conflicts"] = plan.conflicts;
    return out.dump(2);
}

}  // namespace decomp::split
