#include "decomp/canonical.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>

namespace decomp::ddg {

namespace {

using lang::BinOp;
using lang::CallExpr;
using lang::Comparison;
using lang::CompoundStmt;
using lang::Expr;
using lang::NumLit;
using lang::Stmt;
using lang::StrLit;
using lang::VarRef;

constexpr std::uint64_t kSeed = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + kSeed + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t hash_string(std::uint64_t h, const std::string& s) {
    h = mix(h, s.size());
    for (unsigned char c : s) h = mix(h, c);
    return h;
}

std::uint64_t hash_number(const NumLit& num) {
    std::uint64_t bits;
    double v = num.value;
    std::memcpy(&bits, &v, sizeof(bits));
    std::uint64_t h = mix(0x21, bits);
    return mix(h, num.is_int ? 1 : 0);
}

// Structural hash of a compound block's body with variables abstracted to
// first-occurrence indices, so consistent renames hash identically.
class BlockHasher {
public:
    std::uint64_t hash(const CompoundStmt& block) {
        collect_block_vars(block);
        std::uint64_t h = mix(0x30, static_cast<std::uint64_t>(block.kind));
        h = mix(h, hash_block_structure(block));
        return h;
    }

    int var_index(const std::string& name) const {
        auto it = order_.find(name);
        return it == order_.end() ? -1 : it->second;
    }

private:
    std::map<std::string, int> order_;

    void touch(const std::string& name) {
        if (!order_.count(name)) {
            int idx = static_cast<int>(order_.size());
            order_[name] = idx;
        }
    }

    void collect_expr_vars(const Expr& expr) {
        if (expr.is<VarRef>()) {
            touch(expr.as<VarRef>().name);
        } else if (expr.is<lang::BinaryOp>()) {
            for (const auto& o : expr.as<lang::BinaryOp>().operands) collect_expr_vars(o);
        } else if (expr.is<Comparison>()) {
            for (const auto& o : expr.as<Comparison>().operands) collect_expr_vars(o);
        } else if (expr.is<CallExpr>()) {
            for (const auto& a : expr.as<CallExpr>().args) collect_expr_vars(a);
        }
    }

    void collect_stmt_vars(const Stmt& stmt) {
        if (stmt.is<lang::AssignStmt>()) {
            const auto& assign = stmt.as<lang::AssignStmt>();
            for (const auto& v : assign.values) collect_expr_vars(v);
            for (const auto& t : assign.targets) touch(t);
        } else if (stmt.is<lang::ExprStmt>()) {
            collect_expr_vars(stmt.as<lang::ExprStmt>().expr);
        } else if (stmt.is<lang::ReturnStmt>()) {
            for (const auto& v : stmt.as<lang::ReturnStmt>().values) collect_expr_vars(v);
        } else {
            collect_block_vars(stmt.as<CompoundStmt>());
        }
    }

    void collect_block_vars(const CompoundStmt& block) {
        if (block.condition) collect_expr_vars(*block.condition);
        if (block.iterable) collect_expr_vars(*block.iterable);
        if (!block.loop_var.empty()) touch(block.loop_var);
        for (const auto& s : block.body) collect_stmt_vars(s);
        for (const auto& clause : block.elifs) {
            collect_expr_vars(clause.condition);
            for (const auto& s : clause.body) collect_stmt_vars(s);
        }
        if (block.else_body) {
            for (const auto& s : *block.else_body) collect_stmt_vars(s);
        }
    }

    std::uint64_t hash_expr_structure(const Expr& expr) {
        if (expr.is<NumLit>()) return hash_number(expr.as<NumLit>());
        if (expr.is<StrLit>()) return hash_string(0x22, expr.as<StrLit>().value);
        if (expr.is<VarRef>()) {
            return mix(0x23, static_cast<std::uint64_t>(var_index(expr.as<VarRef>().name)));
        }
        if (expr.is<lang::BinaryOp>()) {
            const auto& bin = expr.as<lang::BinaryOp>();
            std::uint64_t h = mix(0x24, static_cast<std::uint64_t>(bin.op));
            for (const auto& o : bin.operands) h = mix(h, hash_expr_structure(o));
            return h;
        }
        if (expr.is<Comparison>()) {
            const auto& cmp = expr.as<Comparison>();
            std::uint64_t h = mix(0x25, static_cast<std::uint64_t>(cmp.op));
            for (const auto& o : cmp.operands) h = mix(h, hash_expr_structure(o));
            return h;
        }
        const auto& call = expr.as<CallExpr>();
        std::uint64_t h = hash_string(0x26, call.callee);
        for (const auto& a : call.args) h = mix(h, hash_expr_structure(a));
        return h;
    }

    std::uint64_t hash_stmt_structure(const Stmt& stmt) {
        if (stmt.is<lang::AssignStmt>()) {
            const auto& assign = stmt.as<lang::AssignStmt>();
            std::uint64_t h = 0x31;
            for (const auto& t : assign.targets) {
                h = mix(h, static_cast<std::uint64_t>(var_index(t)));
            }
            for (const auto& v : assign.values) h = mix(h, hash_expr_structure(v));
            return h;
        }
        if (stmt.is<lang::ExprStmt>()) {
            return mix(0x32, hash_expr_structure(stmt.as<lang::ExprStmt>().expr));
        }
        if (stmt.is<lang::ReturnStmt>()) {
            std::uint64_t h = 0x33;
            for (const auto& v : stmt.as<lang::ReturnStmt>().values) {
                h = mix(h, hash_expr_structure(v));
            }
            return h;
        }
        return mix(0x34, hash_block_structure(stmt.as<CompoundStmt>()));
    }

    std::uint64_t hash_block_structure(const CompoundStmt& block) {
        std::uint64_t h = mix(0x35, static_cast<std::uint64_t>(block.kind));
        if (block.condition) h = mix(h, hash_expr_structure(*block.condition));
        if (block.iterable) h = mix(h, hash_expr_structure(*block.iterable));
        if (!block.loop_var.empty()) {
            h = mix(h, static_cast<std::uint64_t>(var_index(block.loop_var)));
        }
        for (const auto& s : block.body) h = mix(h, hash_stmt_structure(s));
        for (const auto& clause : block.elifs) {
            h = mix(h, 0x36);
            h = mix(h, hash_expr_structure(clause.condition));
            for (const auto& s : clause.body) h = mix(h, hash_stmt_structure(s));
        }
        if (block.else_body) {
            h = mix(h, 0x37);
            for (const auto& s : *block.else_body) h = mix(h, hash_stmt_structure(s));
        }
        return h;
    }
};

class Canonicalizer {
public:
    explicit Canonicalizer(const Ddg& graph) : graph_(graph) {
        int ordinal = 0;
        for (const auto& node : graph.nodes) {
            if (node.kind == NodeKind::Source && node.origin == SourceOrigin::Input) {
                input_ordinal_[node.id] = ordinal++;
            }
        }
    }

    CanonicalForm run() {
        CanonicalForm form;
        for (int goal : graph_.goal_order) {
            form.goal_digests.push_back(goal_digest(goal));
        }
        form.sorted_digests = form.goal_digests;
        std::sort(form.sorted_digests.begin(), form.sorted_digests.end());
        std::uint64_t h = 0x01;
        for (std::uint64_t d : form.sorted_digests) h = mix(h, d);
        form.program_digest = h;
        return form;
    }

private:
    const Ddg& graph_;
    std::map<int, int> input_ordinal_;
    std::map<std::pair<int, std::string>, std::uint64_t> memo_;
    std::map<int, std::uint64_t> block_memo_;

    std::uint64_t goal_digest(int goal_id) {
        const DdgNode& goal = graph_.node(goal_id);
        if (goal.is_phantom_goal()) {
            return mix(0x29, block_digest(graph_.node(goal.block_goal_of)));
        }
        std::uint64_t h = 0x28;
        for (const auto& arg : goal.goal_args) h = mix(h, expr_digest(arg, goal));
        return h;
    }

    // Digest of one output of a node; `var` may be empty for single-output
    // nodes.
    std::uint64_t output_digest(int id, const std::string& var) {
        const DdgNode& node = graph_.node(id);
        std::string key_var = node.outputs.size() > 1 ? var : std::string();
        auto key = std::make_pair(id, key_var);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        std::uint64_t result;
        if (node.kind == NodeKind::Source) {
            if (node.origin == SourceOrigin::Input) {
                result = mix(0x11, static_cast<std::uint64_t>(input_ordinal_.at(id)));
            } else {
                // Named constants digest exactly like inline literals, so
                // naming a constant never changes equivalence.
                result = expr_digest(*node.expr, node);
            }
        } else if (node.block) {
            std::uint64_t base = block_digest(node);
            if (node.outputs.size() > 1) {
                auto at = std::find(node.outputs.begin(), node.outputs.end(), var);
                std::uint64_t index =
                    at == node.outputs.end()
                        ? 0
                        : static_cast<std::uint64_t>(std::distance(node.outputs.begin(), at));
                result = mix(mix(0x27, base), index);
            } else {
                result = base;
            }
        } else if (node.expr) {
            result = expr_digest(*node.expr, node);
        } else {
            result = 0x3f;  // bare expression statement: no consumable value
        }
        memo_[key] = result;
        return result;
    }

    std::uint64_t block_digest(const DdgNode& node) {
        auto it = block_memo_.find(node.id);
        if (it != block_memo_.end()) return it->second;
        BlockHasher hasher;
        std::uint64_t structure = hasher.hash(*node.block);
        // Pair each external read's structural position with its producer.
        std::vector<std::pair<int, std::uint64_t>> inputs;
        for (const auto& read : node.reads) {
            inputs.emplace_back(hasher.var_index(read.name),
                                output_digest(read.producer, read.value));
        }
        std::sort(inputs.begin(), inputs.end());
        std::uint64_t h = mix(0x2a, structure);
        for (const auto& [slot, digest] : inputs) {
            h = mix(h, static_cast<std::uint64_t>(slot));
            h = mix(h, digest);
        }
        block_memo_[node.id] = h;
        return h;
    }

    std::uint64_t expr_digest(const Expr& expr, const DdgNode& reader) {
        if (expr.is<NumLit>()) return hash_number(expr.as<NumLit>());
        if (expr.is<StrLit>()) return hash_string(0x22, expr.as<StrLit>().value);
        if (expr.is<VarRef>()) {
            const ReadBinding* read = reader.binding_of(expr.as<VarRef>().name);
            return output_digest(read->producer, read->value);
        }
        if (expr.is<lang::BinaryOp>()) {
            const auto& bin = expr.as<lang::BinaryOp>();
            std::uint64_t h = mix(0x23, static_cast<std::uint64_t>(bin.op));
            for (const auto& o : bin.operands) h = mix(h, expr_digest(o, reader));
            return h;
        }
        if (expr.is<Comparison>()) {
            const auto& cmp = expr.as<Comparison>();
            std::uint64_t h = mix(0x24, static_cast<std::uint64_t>(cmp.op));
            for (const auto& o : cmp.operands) h = mix(h, expr_digest(o, reader));
            return h;
        }
        const auto& call = expr.as<CallExpr>();
        std::uint64_t h = hash_string(0x25, call.callee);
        for (const auto& a : call.args) h = mix(h, expr_digest(a, reader));
        return h;
    }
};

}  // namespace

CanonicalForm canonical_form(const Ddg& graph) {
    Canonicalizer canonicalizer(graph);
    return canonicalizer.run();
}

}  // namespace decomp::ddg
