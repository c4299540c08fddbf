#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "decomp/span.hpp"

namespace decomp::lang {

enum class BinOp { Add, Sub, Mul, Div, FloorDiv, Mod, Pow };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BlockKind { If, While, For };

const char* bin_op_text(BinOp op);
const char* cmp_op_text(CmpOp op);
const char* block_kind_text(BlockKind kind);

struct Expr;

struct NumLit {
    std::string lexeme;  // original spelling, kept for faithful re-emission
    double value = 0;
    bool is_int = true;
};

struct StrLit {
    std::string value;
};

struct VarRef {
    std::string name;
};

struct BinaryOp {
    BinOp op;
    std::vector<Expr> operands;  // [lhs, rhs]
};

struct Comparison {
    CmpOp op;
    std::vector<Expr> operands;  // [lhs, rhs]
};

struct CallExpr {
    std::string callee;
    std::vector<Expr> args;
};

struct Expr {
    std::variant<NumLit, StrLit, VarRef, BinaryOp, Comparison, CallExpr> node;
    SourceSpan span;

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(node);
    }
    template <typename T>
    T& as() {
        return std::get<T>(node);
    }
};

struct Stmt;

struct AssignStmt {
    std::vector<std::string> targets;
    std::vector<Expr> values;  // size == targets.size(), or 1 (multi-capture call)
};

struct ExprStmt {
    Expr expr;
};

struct ReturnStmt {
    std::vector<Expr> values;
};

struct ElifClause {
    Expr condition;
    std::vector<Stmt> body;
};

// if/while/for with opaque dataflow summary. The nested statements are kept
// for printing and interpretation; analyses use used_vars/defined_vars only.
struct CompoundStmt {
    BlockKind kind;
    std::optional<Expr> condition;  // if/while
    std::string loop_var;           // for
    std::optional<Expr> iterable;   // for
    std::vector<Stmt> body;
    std::vector<ElifClause> elifs;
    std::optional<std::vector<Stmt>> else_body;

    std::set<std::string> used_vars;     // read from the enclosing scope
    std::set<std::string> defined_vars;  // possibly written, visible after the block
    bool contains_print = false;
};

struct Stmt {
    std::variant<AssignStmt, ExprStmt, ReturnStmt, CompoundStmt> node;
    SourceSpan span;

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(node);
    }
    template <typename T>
    T& as() {
        return std::get<T>(node);
    }
};

struct FunctionDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<Stmt> body;
    int return_arity = 0;
    SourceSpan span;
};

// Top-level items keep source interleaving of defs and global statements.
struct TopLevel {
    std::variant<FunctionDef, Stmt> item;
    bool is_function() const { return std::holds_alternative<FunctionDef>(item); }
    const FunctionDef& function() const { return std::get<FunctionDef>(item); }
    FunctionDef& function() { return std::get<FunctionDef>(item); }
    const Stmt& statement() const { return std::get<Stmt>(item); }
    Stmt& statement() { return std::get<Stmt>(item); }
};

struct Program {
    std::vector<TopLevel> items;

    std::vector<const FunctionDef*> functions() const;
    std::vector<const Stmt*> global_statements() const;
    const FunctionDef* find_function(const std::string& name) const;
};

// Names callable without a user definition.
const std::set<std::string>& builtin_functions();
bool is_builtin(const std::string& name);

struct ReadsWrites {
    std::set<std::string> reads;
    std::set<std::string> writes;
};

// Purely syntactic read/write sets of one statement. CompoundStmt uses the
// conservative used/defined summaries computed at parse time.
ReadsWrites resolve_reads_writes(const Stmt& stmt);

// All variable names read anywhere in an expression.
void collect_reads(const Expr& expr, std::set<std::string>& out);

// True if any expression in the statement (recursively) calls `name`.
bool statement_calls(const Stmt& stmt, const std::string& name);

// Walk every expression in a statement, including compound bodies.
void for_each_expr(const Stmt& stmt, const std::function<void(const Expr&)>& fn);

}  // namespace decomp::lang
