#include "decomp/rewrite.hpp"

namespace decomp::lang {

void rename_variables(Expr& expr, const NameMapper& mapper) {
    if (expr.is<VarRef>()) {
        auto& var = expr.as<VarRef>();
        var.name = mapper(var.name);
    } else if (expr.is<BinaryOp>()) {
        for (auto& e : expr.as<BinaryOp>().operands) rename_variables(e, mapper);
    } else if (expr.is<Comparison>()) {
        for (auto& e : expr.as<Comparison>().operands) rename_variables(e, mapper);
    } else if (expr.is<CallExpr>()) {
        for (auto& e : expr.as<CallExpr>().args) rename_variables(e, mapper);
    }
}

void rename_variables(Stmt& stmt, const NameMapper& mapper) {
    if (stmt.is<AssignStmt>()) {
        auto& assign = stmt.as<AssignStmt>();
        for (auto& value : assign.values) rename_variables(value, mapper);
        for (auto& target : assign.targets) target = mapper(target);
    } else if (stmt.is<ExprStmt>()) {
        rename_variables(stmt.as<ExprStmt>().expr, mapper);
    } else if (stmt.is<ReturnStmt>()) {
        for (auto& value : stmt.as<ReturnStmt>().values) rename_variables(value, mapper);
    } else {
        auto& block = stmt.as<CompoundStmt>();
        if (block.condition) rename_variables(*block.condition, mapper);
        if (block.iterable) rename_variables(*block.iterable, mapper);
        if (!block.loop_var.empty()) block.loop_var = mapper(block.loop_var);
        for (auto& inner : block.body) rename_variables(inner, mapper);
        for (auto& clause : block.elifs) {
            rename_variables(clause.condition, mapper);
            for (auto& inner : clause.body) rename_variables(inner, mapper);
        }
        if (block.else_body) {
            for (auto& inner : *block.else_body) rename_variables(inner, mapper);
        }
        recompute_block_summary(block);
    }
}

namespace {

void scan_clause(CompoundStmt& block, const std::vector<Stmt>& body,
                 std::set<std::string> definitely_written) {
    for (const Stmt& stmt : body) {
        ReadsWrites rw = resolve_reads_writes(stmt);
        for (const auto& r : rw.reads) {
            if (!definitely_written.count(r)) block.used_vars.insert(r);
        }
        // Only straight-line assignments definitely execute before later
        // statements; nested compound writes stay possible-only.
        if (stmt.is<AssignStmt>()) {
            for (const auto& t : stmt.as<AssignStmt>().targets) definitely_written.insert(t);
        }
        for (const auto& w : rw.writes) block.defined_vars.insert(w);
    }
}

}  // namespace

void recompute_block_summary(CompoundStmt& block) {
    block.used_vars.clear();
    block.defined_vars.clear();
    if (block.condition) collect_reads(*block.condition, block.used_vars);
    if (block.iterable) collect_reads(*block.iterable, block.used_vars);
    std::set<std::string> seed;
    if (block.kind == BlockKind::For) seed.insert(block.loop_var);
    scan_clause(block, block.body, seed);
    for (const auto& clause : block.elifs) {
        collect_reads(clause.condition, block.used_vars);
        scan_clause(block, clause.body, {});
    }
    if (block.else_body) scan_clause(block, *block.else_body, {});
    if (block.kind == BlockKind::For) block.defined_vars.insert(block.loop_var);

    Stmt probe{block, SourceSpan{}};
    block.contains_print = statement_calls(probe, "print");
}

}  // namespace decomp::lang
