#include "decomp/interp.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

namespace decomp::interp {

namespace {

using namespace lang;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

long long parse_int(const std::string& text, SourceSpan span) {
    size_t begin = text.find_first_not_of(" \t");
    size_t end = text.find_last_not_of(" \t");
    if (begin == std::string::npos) throw InterpError(span, "int() on empty string");
    std::string trimmed = text.substr(begin, end - begin + 1);
    try {
        size_t used = 0;
        long long v = std::stoll(trimmed, &used);
        if (used != trimmed.size()) throw std::invalid_argument("trail");
        return v;
    } catch (const std::exception&) {
        throw InterpError(span, "int() cannot parse '" + text + "'");
    }
}

double parse_float(const std::string& text, SourceSpan span) {
    size_t begin = text.find_first_not_of(" \t");
    size_t end = text.find_last_not_of(" \t");
    if (begin == std::string::npos) throw InterpError(span, "float() on empty string");
    std::string trimmed = text.substr(begin, end - begin + 1);
    try {
        size_t used = 0;
        double v = std::stod(trimmed, &used);
        if (used != trimmed.size()) throw std::invalid_argument("trail");
        return v;
    } catch (const std::exception&) {
        throw InterpError(span, "float() cannot parse '" + text + "'");
    }
}

bool truthy(const Value& v) {
    if (v.is_int()) return std::get<long long>(v.data) != 0;
    if (v.is_float()) return std::get<double>(v.data) != 0.0;
    if (v.is_string()) return !std::get<std::string>(v.data).empty();
    return !std::get<ValueList>(v.data).empty();
}

class Interpreter {
public:
    Interpreter(const Program& program, const std::vector<std::string>& inputs, long long step_limit)
        : program_(program), inputs_(inputs), step_limit_(step_limit) {
        for (const auto& item : program.items) {
            if (item.is_function()) functions_[item.function().name] = &item.function();
        }
    }

    RunResult run() {
        Env globals;
        for (const auto& item : program_.items) {
            if (item.is_function()) continue;
            exec_statement(item.statement(), globals);
        }
        return RunResult{std::move(output_)};
    }

private:
    using Env = std::map<std::string, Value>;

    const Program& program_;
    const std::vector<std::string>& inputs_;
    long long step_limit_;
    long long steps_ = 0;
    size_t next_input_ = 0;
    std::map<std::string, const FunctionDef*> functions_;
    std::vector<std::string> output_;

    void tick(SourceSpan span) {
        if (++steps_ > step_limit_) throw InterpError(span, "step limit exceeded");
    }

    // Returns the return values if a return statement executed.
    std::optional<std::vector<Value>> exec_statement(const Stmt& stmt, Env& env) {
        tick(stmt.span);
        if (stmt.is<AssignStmt>()) {
            const auto& assign = stmt.as<AssignStmt>();
            std::vector<Value> values;
            if (assign.values.size() == 1 && assign.targets.size() > 1) {
                // Multi-capture from a user call.
                values = eval_multi(assign.values[0], env, assign.targets.size());
            } else {
                for (const auto& v : assign.values) values.push_back(eval(v, env));
            }
            for (size_t i = 0; i < assign.targets.size(); ++i) {
                env[assign.targets[i]] = values[i];
            }
            return std::nullopt;
        }
        if (stmt.is<ExprStmt>()) {
            eval_any(stmt.as<ExprStmt>().expr, env);
            return std::nullopt;
        }
        if (stmt.is<ReturnStmt>()) {
            std::vector<Value> values;
            for (const auto& v : stmt.as<ReturnStmt>().values) values.push_back(eval(v, env));
            return values;
        }
        return exec_block(stmt.as<CompoundStmt>(), stmt.span, env);
    }

    std::optional<std::vector<Value>> exec_body(const std::vector<Stmt>& body, Env& env) {
        for (const auto& stmt : body) {
            if (auto ret = exec_statement(stmt, env)) return ret;
        }
        return std::nullopt;
    }

    std::optional<std::vector<Value>> exec_block(const CompoundStmt& block, SourceSpan span, Env& env) {
        if (block.kind == BlockKind::If) {
            if (truthy(eval(*block.condition, env))) return exec_body(block.body, env);
            for (const auto& clause : block.elifs) {
                if (truthy(eval(clause.condition, env))) return exec_body(clause.body, env);
            }
            if (block.else_body) return exec_body(*block.else_body, env);
            return std::nullopt;
        }
        if (block.kind == BlockKind::While) {
            while (truthy(eval(*block.condition, env))) {
                tick(span);
                if (auto ret = exec_body(block.body, env)) return ret;
            }
            return std::nullopt;
        }
        Value iterable = eval(*block.iterable, env);
        if (iterable.is_list()) {
            for (const Value& item : std::get<ValueList>(iterable.data)) {
                tick(span);
                env[block.loop_var] = item;
                if (auto ret = exec_body(block.body, env)) return ret;
            }
        } else if (iterable.is_string()) {
            for (char c : std::get<std::string>(iterable.data)) {
                tick(span);
                env[block.loop_var] = Value{std::string(1, c)};
                if (auto ret = exec_body(block.body, env)) return ret;
            }
        } else {
            throw InterpError(span, "for loop requires a list or string");
        }
        return std::nullopt;
    }

    // Evaluates an expression that may legitimately produce no value
    // (a bare call to a void user function or print).
    void eval_any(const Expr& expr, Env& env) {
        if (expr.is<CallExpr>()) {
            const auto& call = expr.as<CallExpr>();
            if (functions_.count(call.callee)) {
                call_user(call, env, expr.span);
                return;
            }
        }
        eval(expr, env);
    }

    std::vector<Value> eval_multi(const Expr& expr, Env& env, size_t expected) {
        if (!expr.is<CallExpr>()) throw InterpError(expr.span, "cannot unpack a non-call value");
        const auto& call = expr.as<CallExpr>();
        auto it = functions_.find(call.callee);
        if (it == functions_.end()) throw InterpError(expr.span, "cannot unpack a builtin result");
        std::vector<Value> values = call_user(call, env, expr.span);
        if (values.size() != expected) {
            throw InterpError(expr.span, "expected " + std::to_string(expected) + " values, got " +
                                             std::to_string(values.size()));
        }
        return values;
    }

    std::vector<Value> call_user(const CallExpr& call, Env& env, SourceSpan) {
        const FunctionDef& def = *functions_.at(call.callee);
        Env frame;
        for (size_t i = 0; i < def.params.size(); ++i) {
            frame[def.params[i]] = eval(call.args[i], env);
        }
        if (auto ret = exec_body(def.body, frame)) return *ret;
        return {};
    }

    Value eval(const Expr& expr, Env& env) {
        tick(expr.span);
        if (expr.is<NumLit>()) {
            const auto& num = expr.as<NumLit>();
            if (num.is_int) return Value{static_cast<long long>(num.value)};
            return Value{num.value};
        }
        if (expr.is<StrLit>()) return Value{expr.as<StrLit>().value};
        if (expr.is<VarRef>()) {
            auto it = env.find(expr.as<VarRef>().name);
            if (it == env.end()) {
                throw InterpError(expr.span, "undefined variable '" + expr.as<VarRef>().name + "'");
            }
            return it->second;
        }
        if (expr.is<Comparison>()) {
            const auto& cmp = expr.as<Comparison>();
            Value lhs = eval(cmp.operands[0], env);
            Value rhs = eval(cmp.operands[1], env);
            return Value{static_cast<long long>(compare(cmp.op, lhs, rhs, expr.span) ? 1 : 0)};
        }
        if (expr.is<BinaryOp>()) {
            const auto& bin = expr.as<BinaryOp>();
            Value lhs = eval(bin.operands[0], env);
            Value rhs = eval(bin.operands[1], env);
            return arith(bin.op, lhs, rhs, expr.span);
        }
        return call(expr.as<CallExpr>(), env, expr.span);
    }

    bool compare(CmpOp op, const Value& lhs, const Value& rhs, SourceSpan span) {
        if (lhs.is_number() && rhs.is_number()) {
            double a = lhs.as_number();
            double b = rhs.as_number();
            switch (op) {
                case CmpOp::Eq: return a == b;
                case CmpOp::Ne: return a != b;
                case CmpOp::Lt: return a < b;
                case CmpOp::Le: return a <= b;
                case CmpOp::Gt: return a > b;
                case CmpOp::Ge: return a >= b;
            }
        }
        if (lhs.is_string() && rhs.is_string()) {
            const auto& a = std::get<std::string>(lhs.data);
            const auto& b = std::get<std::string>(rhs.data);
            switch (op) {
                case CmpOp::Eq: return a == b;
                case CmpOp::Ne: return a != b;
                case CmpOp::Lt: return a < b;
                case CmpOp::Le: return a <= b;
                case CmpOp::Gt: return a > b;
                case CmpOp::Ge: return a >= b;
            }
        }
        throw InterpError(span, "comparison between incompatible types");
    }

    Value arith(BinOp op, const Value& lhs, const Value& rhs, SourceSpan span) {
        if (op == BinOp::Add) {
            if (lhs.is_string() && rhs.is_string()) {
                return Value{std::get<std::string>(lhs.data) + std::get<std::string>(rhs.data)};
            }
            if (lhs.is_list() && rhs.is_list()) {
                ValueList out = std::get<ValueList>(lhs.data);
                const auto& more = std::get<ValueList>(rhs.data);
                out.insert(out.end(), more.begin(), more.end());
                return Value{std::move(out)};
            }
        }
        if (!lhs.is_number() || !rhs.is_number()) {
            throw InterpError(span, std::string("operator ") + bin_op_text(op) +
                                        " requires numeric operands");
        }
        bool both_int = lhs.is_int() && rhs.is_int();
        double a = lhs.as_number();
        double b = rhs.as_number();
        // Integer arithmetic widens to double instead of overflowing.
        long long result;
        switch (op) {
            case BinOp::Add:
                if (both_int && !__builtin_add_overflow(std::get<long long>(lhs.data),
                                                        std::get<long long>(rhs.data), &result)) {
                    return Value{result};
                }
                return Value{a + b};
            case BinOp::Sub:
                if (both_int && !__builtin_sub_overflow(std::get<long long>(lhs.data),
                                                        std::get<long long>(rhs.data), &result)) {
                    return Value{result};
                }
                return Value{a - b};
            case BinOp::Mul:
                if (both_int && !__builtin_mul_overflow(std::get<long long>(lhs.data),
                                                        std::get<long long>(rhs.data), &result)) {
                    return Value{result};
                }
                return Value{a * b};
            case BinOp::Div:
                if (b == 0) throw InterpError(span, "division by zero");
                return Value{a / b};
            case BinOp::FloorDiv: {
                if (b == 0) throw InterpError(span, "division by zero");
                if (both_int) {
                    long long ia = std::get<long long>(lhs.data);
                    long long ib = std::get<long long>(rhs.data);
                    long long q = ia / ib;
                    if ((ia % ib != 0) && ((ia < 0) != (ib < 0))) --q;
                    return Value{q};
                }
                return Value{std::floor(a / b)};
            }
            case BinOp::Mod: {
                if (b == 0) throw InterpError(span, "modulo by zero");
                if (both_int) {
                    long long ia = std::get<long long>(lhs.data);
                    long long ib = std::get<long long>(rhs.data);
                    long long r = ia % ib;
                    if (r != 0 && (r < 0) != (ib < 0)) r += ib;
                    return Value{r};
                }
                double r = std::fmod(a, b);
                if (r != 0 && (r < 0) != (b < 0)) r += b;
                return Value{r};
            }
            case BinOp::Pow: {
                if (both_int && b >= 0) {
                    long long base = std::get<long long>(lhs.data);
                    long long exp = std::get<long long>(rhs.data);
                    long long result = 1;
                    bool overflow = false;
                    for (long long i = 0; i < exp; ++i) {
                        if (result > (1LL << 53) || result < -(1LL << 53)) {
                            overflow = true;
                            break;
                        }
                        result *= base;
                    }
                    if (!overflow) return Value{result};
                }
                return Value{std::pow(a, b)};
            }
        }
        throw InterpError(span, "unreachable operator");
    }

    Value call(const CallExpr& call_expr, Env& env, SourceSpan span) {
        const std::string& callee = call_expr.callee;
        if (functions_.count(callee)) {
            std::vector<Value> values = call_user(call_expr, env, span);
            if (values.size() != 1) {
                throw InterpError(span, "'" + callee + "' used as a value but returns " +
                                            std::to_string(values.size()) + " values");
            }
            return values[0];
        }
        std::vector<Value> args;
        if (callee == "input") {
            if (next_input_ >= inputs_.size()) throw InterpError(span, "input exhausted");
            return Value{inputs_[next_input_++]};
        }
        for (const auto& a : call_expr.args) args.push_back(eval(a, env));
        if (callee == "print") {
            std::string line;
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) line += ' ';
                line += format_value(args[i]);
            }
            output_.push_back(std::move(line));
            return Value{0LL};
        }
        if (callee == "int") {
            const Value& v = args[0];
            if (v.is_int()) return v;
            if (v.is_float()) return Value{static_cast<long long>(std::trunc(std::get<double>(v.data)))};
            if (v.is_string()) return Value{parse_int(std::get<std::string>(v.data), span)};
            throw InterpError(span, "int() on a list");
        }
        if (callee == "float") {
            const Value& v = args[0];
            if (v.is_float()) return v;
            if (v.is_int()) return Value{static_cast<double>(std::get<long long>(v.data))};
            if (v.is_string()) return Value{parse_float(std::get<std::string>(v.data), span)};
            throw InterpError(span, "float() on a list");
        }
        if (callee == "str") return Value{format_value(args[0])};
        if (callee == "len") {
            const Value& v = args[0];
            if (v.is_string()) return Value{static_cast<long long>(std::get<std::string>(v.data).size())};
            if (v.is_list()) return Value{static_cast<long long>(std::get<ValueList>(v.data).size())};
            throw InterpError(span, "len() requires a string or list");
        }
        if (callee == "abs") {
            const Value& v = args[0];
            if (v.is_int()) return Value{std::llabs(std::get<long long>(v.data))};
            if (v.is_float()) return Value{std::fabs(std::get<double>(v.data))};
            throw InterpError(span, "abs() requires a number");
        }
        if (callee == "round") {
            if (!args[0].is_number()) throw InterpError(span, "round() requires a number");
            double v = args[0].as_number();
            if (args.size() == 1) return Value{static_cast<long long>(std::llround(v))};
            if (!args[1].is_int()) throw InterpError(span, "round() digit count must be an integer");
            double scale = std::pow(10.0, static_cast<double>(std::get<long long>(args[1].data)));
            return Value{std::round(v * scale) / scale};
        }
        if (callee == "split") {
            if (!args[0].is_string()) throw InterpError(span, "split() requires a string");
            const std::string& text = std::get<std::string>(args[0].data);
            ValueList parts;
            if (args.size() == 2) {
                if (!args[1].is_string() || std::get<std::string>(args[1].data).empty()) {
                    throw InterpError(span, "split() separator must be a nonempty string");
                }
                const std::string& sep = std::get<std::string>(args[1].data);
                size_t start = 0;
                while (true) {
                    size_t at = text.find(sep, start);
                    if (at == std::string::npos) {
                        parts.push_back(Value{text.substr(start)});
                        break;
                    }
                    parts.push_back(Value{text.substr(start, at - start)});
                    start = at + sep.size();
                }
            } else {
                size_t i = 0;
                while (i < text.size()) {
                    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
                    size_t start = i;
                    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
                    if (i > start) parts.push_back(Value{text.substr(start, i - start)});
                }
            }
            return Value{std::move(parts)};
        }
        throw InterpError(span, "unknown function '" + callee + "'");
    }
};

}  // namespace

std::string format_value(const Value& value) {
    if (value.is_int()) return std::to_string(std::get<long long>(value.data));
    if (value.is_float()) return format_double(std::get<double>(value.data));
    if (value.is_string()) return std::get<std::string>(value.data);
    const auto& list = std::get<ValueList>(value.data);
    std::string out = "[";
    for (size_t i = 0; i < list.size(); ++i) {
        if (i) out += ", ";
        out += format_value(list[i]);
    }
    out += "]";
    return out;
}

RunResult run_program(const lang::Program& program, const std::vector<std::string>& inputs,
                      long long step_limit) {
    Interpreter interp(program, inputs, step_limit);
    return interp.run();
}

}  // namespace decomp::interp
