#include "decomp/pretty.hpp"

#include <sstream>

namespace decomp::lang {

namespace {

// Precedence levels, higher binds tighter.
int precedence(const Expr& expr) {
    if (expr.is<Comparison>()) return 1;
    if (expr.is<BinaryOp>()) {
        switch (expr.as<BinaryOp>().op) {
            case BinOp::Add:
            case BinOp::Sub: return 2;
            case BinOp::Mul:
            case BinOp::Div:
            case BinOp::FloorDiv:
            case BinOp::Mod: return 3;
            case BinOp::Pow: return 4;
        }
    }
    return 5;  // literals, vars, calls
}

void print_expr(const Expr& expr, std::ostringstream& out);

void print_child(const Expr& child, int parent_prec, bool needs_parens_at_equal, std::ostringstream& out) {
    int child_prec = precedence(child);
    bool parens = child_prec < parent_prec || (child_prec == parent_prec && needs_parens_at_equal);
    if (parens) out << '(';
    print_expr(child, out);
    if (parens) out << ')';
}

std::string escape_string(const std::string& value) {
    std::string out;
    out.reserve(value.size() + 2);
    out += '"';
    for (char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

void print_expr(const Expr& expr, std::ostringstream& out) {
    if (expr.is<NumLit>()) {
        const auto& num = expr.as<NumLit>();
        if (num.value < 0) {
            // A folded negative literal needs parens inside larger expressions;
            // callers handle that via precedence 5, so emit plainly here.
            out << num.lexeme;
        } else {
            out << num.lexeme;
        }
    } else if (expr.is<StrLit>()) {
        out << escape_string(expr.as<StrLit>().value);
    } else if (expr.is<VarRef>()) {
        out << expr.as<VarRef>().name;
    } else if (expr.is<CallExpr>()) {
        const auto& call = expr.as<CallExpr>();
        out << call.callee << '(';
        for (size_t i = 0; i < call.args.size(); ++i) {
            if (i) out << ", ";
            print_expr(call.args[i], out);
        }
        out << ')';
    } else if (expr.is<Comparison>()) {
        const auto& cmp = expr.as<Comparison>();
        // Comparisons do not nest, so operands only need parens below level 1.
        print_child(cmp.operands[0], 2, false, out);
        out << ' ' << cmp_op_text(cmp.op) << ' ';
        print_child(cmp.operands[1], 2, false, out);
    } else {
        const auto& bin = expr.as<BinaryOp>();
        int prec = precedence(expr);
        bool right_assoc = bin.op == BinOp::Pow;
        print_child(bin.operands[0], prec, right_assoc, out);
        out << ' ' << bin_op_text(bin.op) << ' ';
        print_child(bin.operands[1], prec, !right_assoc, out);
    }
}

void print_stmt(const Stmt& stmt, int indent, std::ostringstream& out);

void print_body(const std::vector<Stmt>& body, int indent, std::ostringstream& out) {
    for (const Stmt& stmt : body) print_stmt(stmt, indent, out);
}

void print_stmt(const Stmt& stmt, int indent, std::ostringstream& out) {
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    if (stmt.is<AssignStmt>()) {
        const auto& assign = stmt.as<AssignStmt>();
        out << pad;
        for (size_t i = 0; i < assign.targets.size(); ++i) {
            if (i) out << ", ";
            out << assign.targets[i];
        }
        out << " = ";
        for (size_t i = 0; i < assign.values.size(); ++i) {
            if (i) out << ", ";
            print_expr(assign.values[i], out);
        }
        out << '\n';
    } else if (stmt.is<ExprStmt>()) {
        out << pad;
        print_expr(stmt.as<ExprStmt>().expr, out);
        out << '\n';
    } else if (stmt.is<ReturnStmt>()) {
        const auto& ret = stmt.as<ReturnStmt>();
        out << pad << "return";
        for (size_t i = 0; i < ret.values.size(); ++i) {
            out << (i ? ", " : " ");
            print_expr(ret.values[i], out);
        }
        out << '\n';
    } else {
        const auto& block = stmt.as<CompoundStmt>();
        out << pad;
        if (block.kind == BlockKind::For) {
            out << "for " << block.loop_var << " in ";
            print_expr(*block.iterable, out);
        } else {
            out << block_kind_text(block.kind) << ' ';
            print_expr(*block.condition, out);
        }
        out << ":\n";
        print_body(block.body, indent + 1, out);
        for (const auto& clause : block.elifs) {
            out << pad << "elif ";
            print_expr(clause.condition, out);
            out << ":\n";
            print_body(clause.body, indent + 1, out);
        }
        if (block.else_body) {
            out << pad << "else:\n";
            print_body(*block.else_body, indent + 1, out);
        }
    }
}

}  // namespace

std::string print_expression(const Expr& expr) {
    std::ostringstream out;
    print_expr(expr, out);
    return out.str();
}

std::string print_statement(const Stmt& stmt, int indent) {
    std::ostringstream out;
    print_stmt(stmt, indent, out);
    return out.str();
}

std::string pretty_print(const Program& program) {
    std::ostringstream out;
    bool previous_was_def = false;
    bool first = true;
    for (const auto& item : program.items) {
        if (item.is_function()) {
            if (!first) out << '\n';
            const FunctionDef& def = item.function();
            out << "def " << def.name << '(';
            for (size_t i = 0; i < def.params.size(); ++i) {
                if (i) out << ", ";
                out << def.params[i];
            }
            out << "):\n";
            print_body(def.body, 1, out);
            previous_was_def = true;
        } else {
            if (previous_was_def) out << '\n';
            previous_was_def = false;
            print_stmt(item.statement(), 0, out);
        }
        first = false;
    }
    return out.str();
}

}  // namespace decomp::lang
