#include "decomp/ast.hpp"

namespace decomp::lang {

const char* bin_op_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::FloorDiv: return "//";
        case BinOp::Mod: return "%";
        case BinOp::Pow: return "**";
    }
    return "?";
}

const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

const char* block_kind_text(BlockKind kind) {
    switch (kind) {
        case BlockKind::If: return "if";
        case BlockKind::While: return "while";
        case BlockKind::For: return "for";
    }
    return "?";
}

std::vector<const FunctionDef*> Program::functions() const {
    std::vector<const FunctionDef*> out;
    for (const auto& item : items) {
        if (item.is_function()) out.push_back(&item.function());
    }
    return out;
}

std::vector<const Stmt*> Program::global_statements() const {
    std::vector<const Stmt*> out;
    for (const auto& item : items) {
        if (!item.is_function()) out.push_back(&item.statement());
    }
    return out;
}

const FunctionDef* Program::find_function(const std::string& name) const {
    for (const auto& item : items) {
        if (item.is_function() && item.function().name == name) return &item.function();
    }
    return nullptr;
}

const std::set<std::string>& builtin_functions() {
    static const std::set<std::string> builtins = {"print", "input", "int",  "float", "str",
                                                   "len",   "abs",   "round", "split"};
    return builtins;
}

bool is_builtin(const std::string& name) { return builtin_functions().count(name) > 0; }

void collect_reads(const Expr& expr, std::set<std::string>& out) {
    if (expr.is<VarRef>()) {
        out.insert(expr.as<VarRef>().name);
    } else if (expr.is<BinaryOp>()) {
        for (const auto& e : expr.as<BinaryOp>().operands) collect_reads(e, out);
    } else if (expr.is<Comparison>()) {
        for (const auto& e : expr.as<Comparison>().operands) collect_reads(e, out);
    } else if (expr.is<CallExpr>()) {
        for (const auto& e : expr.as<CallExpr>().args) collect_reads(e, out);
    }
}

ReadsWrites resolve_reads_writes(const Stmt& stmt) {
    ReadsWrites rw;
    if (stmt.is<AssignStmt>()) {
        const auto& assign = stmt.as<AssignStmt>();
        for (const auto& value : assign.values) collect_reads(value, rw.reads);
        for (const auto& target : assign.targets) rw.writes.insert(target);
    } else if (stmt.is<ExprStmt>()) {
        collect_reads(stmt.as<ExprStmt>().expr, rw.reads);
    } else if (stmt.is<ReturnStmt>()) {
        for (const auto& value : stmt.as<ReturnStmt>().values) collect_reads(value, rw.reads);
    } else {
        const auto& block = stmt.as<CompoundStmt>();
        rw.reads = block.used_vars;
        rw.writes = block.defined_vars;
    }
    return rw;
}

namespace {

void for_each_expr_impl(const Stmt& stmt, const std::function<void(const Expr&)>& fn);

void visit_expr_tree(const Expr& expr, const std::function<void(const Expr&)>& fn) {
    fn(expr);
    if (expr.is<BinaryOp>()) {
        for (const auto& e : expr.as<BinaryOp>().operands) visit_expr_tree(e, fn);
    } else if (expr.is<Comparison>()) {
        for (const auto& e : expr.as<Comparison>().operands) visit_expr_tree(e, fn);
    } else if (expr.is<CallExpr>()) {
        for (const auto& e : expr.as<CallExpr>().args) visit_expr_tree(e, fn);
    }
}

void for_each_expr_impl(const Stmt& stmt, const std::function<void(const Expr&)>& fn) {
    if (stmt.is<AssignStmt>()) {
        for (const auto& value : stmt.as<AssignStmt>().values) visit_expr_tree(value, fn);
    } else if (stmt.is<ExprStmt>()) {
        visit_expr_tree(stmt.as<ExprStmt>().expr, fn);
    } else if (stmt.is<ReturnStmt>()) {
        for (const auto& value : stmt.as<ReturnStmt>().values) visit_expr_tree(value, fn);
    } else {
        const auto& block = stmt.as<CompoundStmt>();
        if (block.condition) visit_expr_tree(*block.condition, fn);
        if (block.iterable) visit_expr_tree(*block.iterable, fn);
        for (const auto& inner : block.body) for_each_expr_impl(inner, fn);
        for (const auto& clause : block.elifs) {
            visit_expr_tree(clause.condition, fn);
            for (const auto& inner : clause.body) for_each_expr_impl(inner, fn);
        }
        if (block.else_body) {
            for (const auto& inner : *block.else_body) for_each_expr_impl(inner, fn);
        }
    }
}

}  // namespace

void for_each_expr(const Stmt& stmt, const std::function<void(const Expr&)>& fn) {
    for_each_expr_impl(stmt, fn);
}

bool statement_calls(const Stmt& stmt, const std::string& name) {
    bool found = false;
    for_each_expr(stmt, [&](const Expr& e) {
        if (e.is<CallExpr>() && e.as<CallExpr>().callee == name) found = true;
    });
    return found;
}

}  // namespace decomp::lang
