#include "decomp/parser.hpp"

#include "decomp/rewrite.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace decomp::lang {

namespace {

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    Program parse_program() {
        Program program;
        while (!check(TokenKind::EndOfFile)) {
            if (check(TokenKind::Indent)) {
                throw ParseError(peek().span, "unexpected indent");
            }
            if (check(TokenKind::KwDef)) {
                program.items.push_back(TopLevel{parse_funcdef()});
            } else {
                program.items.push_back(TopLevel{parse_statement(false)});
            }
        }
        return program;
    }

private:
    const std::vector<Token>& tokens_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool check(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    const Token& expect(TokenKind kind, const std::string& context) {
        if (!check(kind)) {
            throw ParseError(peek().span, std::string("expected ") + token_kind_name(kind) + " " + context +
                                              ", found " + token_kind_name(peek().kind));
        }
        return advance();
    }

    FunctionDef parse_funcdef() {
        FunctionDef def;
        def.span = peek().span;
        expect(TokenKind::KwDef, "to start a function definition");
        def.name = expect(TokenKind::Ident, "after 'def'").text;
        expect(TokenKind::LParen, "after the function name");
        if (!check(TokenKind::RParen)) {
            def.params.push_back(expect(TokenKind::Ident, "in the parameter list").text);
            while (check(TokenKind::Comma)) {
                advance();
                def.params.push_back(expect(TokenKind::Ident, "in the parameter list").text);
            }
        }
        expect(TokenKind::RParen, "to close the parameter list");
        expect(TokenKind::Colon, "after the parameter list");
        expect(TokenKind::Newline, "after ':'");
        def.body = parse_block();
        return def;
    }

    std::vector<Stmt> parse_block() {
        expect(TokenKind::Indent, "to open a block");
        std::vector<Stmt> body;
        while (!check(TokenKind::Dedent) && !check(TokenKind::EndOfFile)) {
            body.push_back(parse_statement(true));
        }
        expect(TokenKind::Dedent, "to close the block");
        return body;
    }

    Stmt parse_statement(bool inside_block) {
        const Token& first = peek();
        if (first.kind == TokenKind::KwDef) {
            if (inside_block) {
                throw SemanticError(first.span, "nested function definitions are not allowed");
            }
            throw ParseError(first.span, "unexpected 'def'");
        }
        if (first.kind == TokenKind::KwReturn) return parse_return();
        if (first.kind == TokenKind::KwIf || first.kind == TokenKind::KwWhile || first.kind == TokenKind::KwFor) {
            return parse_compound();
        }
        if (first.kind == TokenKind::Ident && looks_like_assignment()) return parse_assign();

        Stmt stmt{ExprStmt{parse_expression()}, first.span};
        expect(TokenKind::Newline, "after expression statement");
        return stmt;
    }

    // Lookahead for: IDENT (',' IDENT)* '='
    bool looks_like_assignment() const {
        size_t i = 0;
        while (true) {
            if (peek(i).kind != TokenKind::Ident) return false;
            ++i;
            if (peek(i).kind == TokenKind::Assign) return true;
            if (peek(i).kind != TokenKind::Comma) return false;
            ++i;
        }
    }

    Stmt parse_assign() {
        SourceSpan span = peek().span;
        AssignStmt assign;
        assign.targets.push_back(expect(TokenKind::Ident, "as assignment target").text);
        while (check(TokenKind::Comma)) {
            advance();
            assign.targets.push_back(expect(TokenKind::Ident, "as assignment target").text);
        }
        expect(TokenKind::Assign, "in assignment");
        assign.values.push_back(parse_expression());
        while (check(TokenKind::Comma)) {
            advance();
            assign.values.push_back(parse_expression());
        }
        if (assign.values.size() != assign.targets.size() &&
            !(assign.values.size() == 1 && assign.values[0].is<CallExpr>())) {
            throw ParseError(span, "assignment target count does not match value count");
        }
        expect(TokenKind::Newline, "after assignment");
        return Stmt{std::move(assign), span};
    }

    Stmt parse_return() {
        SourceSpan span = peek().span;
        advance();
        ReturnStmt ret;
        if (!check(TokenKind::Newline)) {
            ret.values.push_back(parse_expression());
            while (check(TokenKind::Comma)) {
                advance();
                ret.values.push_back(parse_expression());
            }
        }
        expect(TokenKind::Newline, "after return statement");
        return Stmt{std::move(ret), span};
    }

    Stmt parse_compound() {
        SourceSpan span = peek().span;
        CompoundStmt block;
        TokenKind kw = advance().kind;
        if (kw == TokenKind::KwIf) {
            block.kind = BlockKind::If;
            block.condition = parse_expression();
        } else if (kw == TokenKind::KwWhile) {
            block.kind = BlockKind::While;
            block.condition = parse_expression();
        } else {
            block.kind = BlockKind::For;
            block.loop_var = expect(TokenKind::Ident, "as loop variable").text;
            expect(TokenKind::KwIn, "after the loop variable");
            block.iterable = parse_expression();
        }
        expect(TokenKind::Colon, "after the block header");
        expect(TokenKind::Newline, "after ':'");
        block.body = parse_block();
        if (block.kind == BlockKind::If) {
            while (check(TokenKind::KwElif)) {
                advance();
                ElifClause clause{parse_expression(), {}};
                expect(TokenKind::Colon, "after the elif condition");
                expect(TokenKind::Newline, "after ':'");
                clause.body = parse_block();
                block.elifs.push_back(std::move(clause));
            }
            if (check(TokenKind::KwElse)) {
                advance();
                expect(TokenKind::Colon, "after 'else'");
                expect(TokenKind::Newline, "after ':'");
                block.else_body = parse_block();
            }
        }
        recompute_block_summary(block);
        return Stmt{std::move(block), span};
    }

    // --- expressions -----------------------------------------------------

    Expr parse_expression() { return parse_comparison(); }

    Expr parse_comparison() {
        Expr lhs = parse_additive();
        CmpOp op;
        switch (peek().kind) {
            case TokenKind::EqEq: op = CmpOp::Eq; break;
            case TokenKind::NotEq: op = CmpOp::Ne; break;
            case TokenKind::Less: op = CmpOp::Lt; break;
            case TokenKind::LessEq: op = CmpOp::Le; break;
            case TokenKind::Greater: op = CmpOp::Gt; break;
            case TokenKind::GreaterEq: op = CmpOp::Ge; break;
            default: return lhs;
        }
        SourceSpan span = advance().span;
        Expr rhs = parse_additive();
        Comparison cmp{op, {}};
        cmp.operands.push_back(std::move(lhs));
        cmp.operands.push_back(std::move(rhs));
        return Expr{std::move(cmp), span};
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
            BinOp op = check(TokenKind::Plus) ? BinOp::Add : BinOp::Sub;
            SourceSpan span = advance().span;
            Expr rhs = parse_multiplicative();
            lhs = make_binary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_power();
        while (check(TokenKind::Star) || check(TokenKind::Slash) || check(TokenKind::SlashSlash) ||
               check(TokenKind::Percent)) {
            BinOp op;
            switch (peek().kind) {
                case TokenKind::Star: op = BinOp::Mul; break;
                case TokenKind::Slash: op = BinOp::Div; break;
                case TokenKind::SlashSlash: op = BinOp::FloorDiv; break;
                default: op = BinOp::Mod; break;
            }
            SourceSpan span = advance().span;
            Expr rhs = parse_power();
            lhs = make_binary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (check(TokenKind::StarStar)) {
            SourceSpan span = advance().span;
            Expr exponent = parse_power();  // right associative
            return make_binary(BinOp::Pow, std::move(base), std::move(exponent), span);
        }
        return base;
    }

    static Expr make_binary(BinOp op, Expr lhs, Expr rhs, SourceSpan span) {
        BinaryOp node{op, {}};
        node.operands.push_back(std::move(lhs));
        node.operands.push_back(std::move(rhs));
        return Expr{std::move(node), span};
    }

    Expr parse_primary() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::IntLit:
            case TokenKind::FloatLit: {
                advance();
                return Expr{NumLit{tok.text, std::stod(tok.text), tok.kind == TokenKind::IntLit}, tok.span};
            }
            case TokenKind::Minus: {
                // Unary minus is only supported on numeric literals.
                advance();
                const Token& num = peek();
                if (num.kind != TokenKind::IntLit && num.kind != TokenKind::FloatLit) {
                    throw ParseError(tok.span, "unary '-' may only prefix a numeric literal");
                }
                advance();
                return Expr{NumLit{"-" + num.text, -std::stod(num.text), num.kind == TokenKind::IntLit},
                            tok.span};
            }
            case TokenKind::StrLit:
                advance();
                return Expr{StrLit{tok.text}, tok.span};
            case TokenKind::Ident: {
                advance();
                if (check(TokenKind::LParen)) {
                    advance();
                    CallExpr call{tok.text, {}};
                    if (!check(TokenKind::RParen)) {
                        call.args.push_back(parse_expression());
                        while (check(TokenKind::Comma)) {
                            advance();
                            call.args.push_back(parse_expression());
                        }
                    }
                    expect(TokenKind::RParen, "to close the argument list");
                    return Expr{std::move(call), tok.span};
                }
                return Expr{VarRef{tok.text}, tok.span};
            }
            case TokenKind::LParen: {
                advance();
                Expr inner = parse_expression();
                expect(TokenKind::RParen, "to close the parenthesized expression");
                return inner;
            }
            default:
                throw ParseError(tok.span, std::string("expected an expression, found ") +
                                               token_kind_name(tok.kind));
        }
    }

};

// --- validation -----------------------------------------------------------

class Validator {
public:
    explicit Validator(Program& program) : program_(program) {}

    void run() {
        collect_functions();
        check_signatures();
        check_calls_and_scopes();
        check_recursion();
    }

private:
    Program& program_;
    std::map<std::string, FunctionDef*> functions_;

    const FunctionDef* lookup(const std::string& name) const {
        auto it = functions_.find(name);
        return it == functions_.end() ? nullptr : it->second;
    }

    void collect_functions() {
        for (auto& item : program_.items) {
            if (!item.is_function()) continue;
            FunctionDef& def = item.function();
            if (functions_.count(def.name)) {
                throw SemanticError(def.span, "duplicate definition of function '" + def.name + "'");
            }
            if (is_builtin(def.name)) {
                throw SemanticError(def.span, "function name '" + def.name + "' shadows a builtin");
            }
            functions_[def.name] = &def;
        }
    }

    void check_signatures() {
        for (auto& [name, def] : functions_) {
            std::set<std::string> seen;
            for (const auto& p : def->params) {
                if (!seen.insert(p).second) {
                    throw SemanticError(def->span, "duplicate parameter '" + p + "' in function '" + name + "'");
                }
            }
            int arity = -1;
            collect_return_arity(def->body, arity, *def);
            def->return_arity = arity < 0 ? 0 : arity;
        }
    }

    void collect_return_arity(const std::vector<Stmt>& body, int& arity, const FunctionDef& def) {
        for (const Stmt& stmt : body) {
            if (stmt.is<ReturnStmt>()) {
                int n = static_cast<int>(stmt.as<ReturnStmt>().values.size());
                if (arity >= 0 && arity != n) {
                    throw SemanticError(stmt.span, "return arity mismatch in function '" + def.name + "'");
                }
                arity = n;
            } else if (stmt.is<CompoundStmt>()) {
                const auto& block = stmt.as<CompoundStmt>();
                collect_return_arity(block.body, arity, def);
                for (const auto& clause : block.elifs) collect_return_arity(clause.body, arity, def);
                if (block.else_body) collect_return_arity(*block.else_body, arity, def);
            }
        }
    }

    void check_call_expr(const Expr& expr) {
        if (!expr.is<CallExpr>()) return;
        const auto& call = expr.as<CallExpr>();
        const std::string& callee = call.callee;
        size_t argc = call.args.size();
        if (functions_.count(callee)) {
            const FunctionDef* def = functions_[callee];
            if (argc != def->params.size()) {
                throw SemanticError(expr.span, "call to '" + callee + "' expects " +
                                                   std::to_string(def->params.size()) + " argument(s), got " +
                                                   std::to_string(argc));
            }
            return;
        }
        if (!is_builtin(callee)) {
            throw SemanticError(expr.span, "call to unknown function '" + callee + "'");
        }
        auto require = [&](bool ok, const char* what) {
            if (!ok) throw SemanticError(expr.span, std::string("builtin ") + callee + " " + what);
        };
        if (callee == "input") {
            require(argc <= 1, "takes at most one argument");
            if (argc == 1) {
                require(call.args[0].is<StrLit>(), "prompt must be a string literal");
            }
        } else if (callee == "int" || callee == "float" || callee == "str" || callee == "len" ||
                   callee == "abs") {
            require(argc == 1, "takes exactly one argument");
        } else if (callee == "round" || callee == "split") {
            require(argc == 1 || argc == 2, "takes one or two arguments");
        }
        // print takes any number of arguments.
    }

    void check_statement(const Stmt& stmt, std::set<std::string>& defined, bool in_function) {
        if (stmt.is<ReturnStmt>() && !in_function) {
            throw SemanticError(stmt.span, "return outside of a function");
        }
        if (stmt.is<AssignStmt>()) {
            const auto& assign = stmt.as<AssignStmt>();
            if (assign.targets.size() > 1 && assign.values.size() == 1) {
                // Unpacking is only defined for calls to multi-return user functions.
                const Expr& value = assign.values[0];
                const FunctionDef* callee = value.is<CallExpr>()
                                                ? lookup(value.as<CallExpr>().callee)
                                                : nullptr;
                if (!callee || callee->return_arity != static_cast<int>(assign.targets.size())) {
                    throw SemanticError(stmt.span,
                                        "cannot unpack a single value into multiple targets");
                }
            }
        }
        if (stmt.is<CompoundStmt>() && statement_calls(stmt, "input")) {
            // Hoisting a repeated read out of a branch or loop is unsound, so
            // input() is restricted to straight-line statements.
            throw SemanticError(stmt.span, "input() may not appear inside if/while/for blocks");
        }
        for_each_expr(stmt, [&](const Expr& e) { check_call_expr(e); });

        ReadsWrites rw = resolve_reads_writes(stmt);
        for (const auto& r : rw.reads) {
            if (!defined.count(r)) {
                throw SemanticError(stmt.span, "use before definition of '" + r + "'");
            }
        }
        for (const auto& w : rw.writes) defined.insert(w);
    }

    void check_calls_and_scopes() {
        std::set<std::string> global_defined;
        for (const auto& item : program_.items) {
            if (item.is_function()) {
                const FunctionDef& def = item.function();
                std::set<std::string> local(def.params.begin(), def.params.end());
                for (const Stmt& stmt : def.body) check_statement(stmt, local, true);
            } else {
                check_statement(item.statement(), global_defined, false);
            }
        }
    }

    void check_recursion() {
        // The call graph must stay a DAG; no direct or mutual recursion.
        std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
        for (auto& [name, def] : functions_) {
            if (!state[name]) visit_for_cycles(name, state);
        }
    }

    void visit_for_cycles(const std::string& name, std::map<std::string, int>& state) {
        state[name] = 1;
        const FunctionDef* def = functions_[name];
        std::set<std::string> callees;
        for (const Stmt& stmt : def->body) {
            for_each_expr(stmt, [&](const Expr& e) {
                if (e.is<CallExpr>() && functions_.count(e.as<CallExpr>().callee)) {
                    callees.insert(e.as<CallExpr>().callee);
                }
            });
        }
        for (const auto& callee : callees) {
            if (state[callee] == 1) {
                throw SemanticError(def->span, "recursive call cycle involving '" + name + "' and '" +
                                                   callee + "'");
            }
            if (state[callee] == 0) visit_for_cycles(callee, state);
        }
        state[name] = 2;
    }
};

}  // namespace

Program parse_tokens(const std::vector<Token>& tokens) {
    if (tokens.empty()) return Program{};
    Parser parser(tokens);
    Program program = parser.parse_program();
    Validator validator(program);
    validator.run();
    return program;
}

Program parse(const std::string& source) { return parse_tokens(tokenize(source)); }

}  // namespace decomp::lang
