#include "decomp/inliner.hpp"

#include <map>
#include <set>

#include "decomp/rewrite.hpp"

namespace decomp::ddg {

namespace {

using namespace lang;

void collect_var_names(const Stmt& stmt, std::set<std::string>& out) {
    ReadsWrites rw = resolve_reads_writes(stmt);
    out.insert(rw.reads.begin(), rw.reads.end());
    out.insert(rw.writes.begin(), rw.writes.end());
    if (stmt.is<CompoundStmt>()) {
        const auto& block = stmt.as<CompoundStmt>();
        for (const auto& inner : block.body) collect_var_names(inner, out);
        for (const auto& clause : block.elifs) {
            for (const auto& inner : clause.body) collect_var_names(inner, out);
        }
        if (block.else_body) {
            for (const auto& inner : *block.else_body) collect_var_names(inner, out);
        }
    }
    for_each_expr(stmt, [&](const Expr& e) {
        if (e.is<VarRef>()) out.insert(e.as<VarRef>().name);
    });
}

class Inliner {
public:
    explicit Inliner(const Program& program) : program_(program) {
        for (const auto& item : program.items) {
            if (item.is_function()) functions_[item.function().name] = &item.function();
            else {
                collect_var_names(item.statement(), used_names_);
            }
        }
        for (const auto& [name, def] : functions_) {
            used_names_.insert(def->params.begin(), def->params.end());
            for (const auto& stmt : def->body) collect_var_names(stmt, used_names_);
        }
    }

    Program run() {
        Program out;
        for (const auto& item : program_.items) {
            if (item.is_function()) continue;
            std::vector<Stmt> expanded;
            expand_statement(item.statement(), expanded);
            for (auto& stmt : expanded) out.items.push_back(TopLevel{std::move(stmt)});
        }
        return out;
    }

private:
    const Program& program_;
    std::map<std::string, const FunctionDef*> functions_;
    std::set<std::string> used_names_;
    int temp_counter_ = 0;

    bool is_user_function(const std::string& name) const { return functions_.count(name) > 0; }

    std::string fresh(const std::string& base) {
        std::string name = base;
        while (used_names_.count(name)) {
            name = base + "_" + std::to_string(++temp_counter_);
        }
        used_names_.insert(name);
        return name;
    }

    // --- body shape checks -------------------------------------------------

    static bool has_nested_return(const std::vector<Stmt>& body) {
        for (const auto& stmt : body) {
            if (!stmt.is<CompoundStmt>()) continue;
            const auto& block = stmt.as<CompoundStmt>();
            auto check = [&](const std::vector<Stmt>& inner) {
                for (const auto& s : inner) {
                    if (s.is<ReturnStmt>()) return true;
                    if (s.is<CompoundStmt>() && has_nested_return({s})) return true;
                }
                return false;
            };
            if (check(block.body)) return true;
            for (const auto& clause : block.elifs) {
                if (check(clause.body)) return true;
            }
            if (block.else_body && check(*block.else_body)) return true;
        }
        return false;
    }

    void check_body_shape(const FunctionDef& def, SourceSpan call_span) const {
        if (has_nested_return(def.body)) {
            throw InlineError(call_span, "cannot inline '" + def.name +
                                             "': return inside an if/while/for block");
        }
        for (size_t i = 0; i + 1 < def.body.size(); ++i) {
            if (def.body[i].is<ReturnStmt>()) {
                throw InlineError(call_span, "cannot inline '" + def.name +
                                                 "': statements after return never execute");
            }
        }
    }

    // --- call expansion ----------------------------------------------------

    // Splice a call to `def`. Returns the renamed trailing return values
    // (empty for arity 0). Emits parameter bindings and body statements.
    std::vector<Expr> splice_call(const CallExpr& call, SourceSpan span, std::vector<Stmt>& out) {
        const FunctionDef& def = *functions_.at(call.callee);
        check_body_shape(def, span);

        std::map<std::string, std::string> rename;
        for (size_t i = 0; i < def.params.size(); ++i) {
            Expr arg = expand_expression(call.args[i], out);
            std::string bound = fresh(def.name + "_" + def.params[i]);
            rename[def.params[i]] = bound;
            AssignStmt bind;
            bind.targets.push_back(bound);
            bind.values.push_back(std::move(arg));
            out.push_back(Stmt{std::move(bind), span});
        }

        auto mapper = [&](const std::string& name) -> std::string {
            auto it = rename.find(name);
            if (it != rename.end()) return it->second;
            std::string renamed = fresh(def.name + "_" + name);
            rename.emplace(name, renamed);
            return renamed;
        };

        std::vector<Expr> return_values;
        for (size_t i = 0; i < def.body.size(); ++i) {
            Stmt stmt = def.body[i];  // copy
            if (stmt.is<ReturnStmt>()) {
                if (i + 1 != def.body.size()) {
                    throw InlineError(span, "cannot inline '" + def.name + "': early return");
                }
                rename_variables(stmt, mapper);
                for (auto& value : stmt.as<ReturnStmt>().values) {
                    return_values.push_back(expand_expression(value, out));
                }
                break;
            }
            rename_variables(stmt, mapper);
            expand_statement(stmt, out);
        }
        return return_values;
    }

    Expr inline_call_to_temp(const CallExpr& call, SourceSpan span, std::vector<Stmt>& out) {
        const FunctionDef& def = *functions_.at(call.callee);
        if (def.return_arity == 0) {
            throw InlineError(span, "call to '" + def.name + "' yields no value to use here");
        }
        if (def.return_arity != 1) {
            throw InlineError(span, "call to '" + def.name +
                                        "' returns multiple values; capture them with a multi-assignment");
        }
        std::vector<Expr> values = splice_call(call, span, out);
        std::string temp = fresh(def.name + "_ret");
        AssignStmt capture;
        capture.targets.push_back(temp);
        capture.values.push_back(std::move(values[0]));
        out.push_back(Stmt{std::move(capture), span});
        return Expr{VarRef{temp}, span};
    }

    Expr expand_expression(const Expr& expr, std::vector<Stmt>& out) {
        Expr result = expr;
        if (result.is<BinaryOp>()) {
            for (auto& o : result.as<BinaryOp>().operands) o = expand_expression(o, out);
        } else if (result.is<Comparison>()) {
            for (auto& o : result.as<Comparison>().operands) o = expand_expression(o, out);
        } else if (result.is<CallExpr>()) {
            auto& call = result.as<CallExpr>();
            for (auto& a : call.args) a = expand_expression(a, out);
            if (is_user_function(call.callee)) {
                return inline_call_to_temp(call, result.span, out);
            }
        }
        return result;
    }

    bool expression_calls_user_function(const Expr& expr) const {
        bool found = false;
        std::function<void(const Expr&)> walk = [&](const Expr& e) {
            if (e.is<BinaryOp>()) {
                for (const auto& o : e.as<BinaryOp>().operands) walk(o);
            } else if (e.is<Comparison>()) {
                for (const auto& o : e.as<Comparison>().operands) walk(o);
            } else if (e.is<CallExpr>()) {
                if (is_user_function(e.as<CallExpr>().callee)) found = true;
                for (const auto& a : e.as<CallExpr>().args) walk(a);
            }
        };
        walk(expr);
        return found;
    }

    void expand_statement(const Stmt& stmt, std::vector<Stmt>& out) {
        if (stmt.is<AssignStmt>()) {
            const auto& assign = stmt.as<AssignStmt>();
            // Multi-capture: a, b = f(x)
            if (assign.values.size() == 1 && assign.targets.size() > 1) {
                const Expr& value = assign.values[0];
                if (value.is<CallExpr>() && is_user_function(value.as<CallExpr>().callee)) {
                    const FunctionDef& def = *functions_.at(value.as<CallExpr>().callee);
                    if (def.return_arity != static_cast<int>(assign.targets.size())) {
                        throw InlineError(stmt.span, "capture of " + std::to_string(assign.targets.size()) +
                                                         " values from '" + def.name + "' (arity " +
                                                         std::to_string(def.return_arity) + ")");
                    }
                    std::vector<Expr> values = splice_call(value.as<CallExpr>(), stmt.span, out);
                    AssignStmt bind;
                    bind.targets = assign.targets;
                    bind.values = std::move(values);
                    out.push_back(Stmt{std::move(bind), stmt.span});
                    return;
                }
            }
            AssignStmt expanded;
            expanded.targets = assign.targets;
            if (assign.values.size() == 1 && assign.targets.size() == 1 &&
                assign.values[0].is<CallExpr>() &&
                is_user_function(assign.values[0].as<CallExpr>().callee)) {
                const auto& call = assign.values[0].as<CallExpr>();
                const FunctionDef& def = *functions_.at(call.callee);
                if (def.return_arity == 0) {
                    throw InlineError(stmt.span,
                                      "capture of a value from '" + def.name + "' which returns nothing");
                }
                if (def.return_arity != 1) {
                    throw InlineError(stmt.span, "capture of 1 value from '" + def.name + "' (arity " +
                                                     std::to_string(def.return_arity) + ")");
                }
                CallExpr expanded_call = call;
                for (auto& a : expanded_call.args) a = expand_expression(a, out);
                std::vector<Expr> values = splice_call(expanded_call, stmt.span, out);
                expanded.values.push_back(std::move(values[0]));
            } else {
                for (const auto& value : assign.values) {
                    expanded.values.push_back(expand_expression(value, out));
                }
            }
            out.push_back(Stmt{std::move(expanded), stmt.span});
        } else if (stmt.is<ExprStmt>()) {
            const Expr& expr = stmt.as<ExprStmt>().expr;
            if (expr.is<CallExpr>() && is_user_function(expr.as<CallExpr>().callee)) {
                const auto& call = expr.as<CallExpr>();
                const FunctionDef& def = *functions_.at(call.callee);
                if (def.return_arity > 0) {
                    throw InlineError(stmt.span, "return value of '" + def.name + "' is discarded");
                }
                CallExpr expanded_call = call;
                for (auto& a : expanded_call.args) a = expand_expression(a, out);
                splice_call(expanded_call, stmt.span, out);
                return;
            }
            ExprStmt expanded{expand_expression(expr, out)};
            out.push_back(Stmt{std::move(expanded), stmt.span});
        } else if (stmt.is<ReturnStmt>()) {
            // Trailing returns are consumed by splice_call; anything else was
            // rejected by check_body_shape.
            out.push_back(stmt);
        } else {
            const auto& block = stmt.as<CompoundStmt>();
            CompoundStmt expanded = block;
            if (block.kind == BlockKind::While && block.condition &&
                expression_calls_user_function(*block.condition)) {
                throw InlineError(stmt.span, "user-function call in a while condition cannot be inlined");
            }
            for (const auto& clause : block.elifs) {
                if (expression_calls_user_function(clause.condition)) {
                    throw InlineError(stmt.span, "user-function call in an elif condition cannot be inlined");
                }
            }
            // if-conditions and for-iterables evaluate exactly once, up front.
            if (expanded.condition) expanded.condition = expand_expression(*expanded.condition, out);
            if (expanded.iterable) expanded.iterable = expand_expression(*expanded.iterable, out);
            expanded.body = expand_body(block.body);
            for (size_t i = 0; i < expanded.elifs.size(); ++i) {
                expanded.elifs[i].body = expand_body(block.elifs[i].body);
            }
            if (block.else_body) expanded.else_body = expand_body(*block.else_body);
            recompute_block_summary(expanded);
            out.push_back(Stmt{std::move(expanded), stmt.span});
        }
    }

    std::vector<Stmt> expand_body(const std::vector<Stmt>& body) {
        std::vector<Stmt> out;
        for (const auto& stmt : body) expand_statement(stmt, out);
        return out;
    }
};

}  // namespace

lang::Program inline_program(const lang::Program& program) {
    if (program.functions().empty()) return program;
    Inliner inliner(program);
    return inliner.run();
}

}  // namespace decomp::ddg
