#pragma once

#include <string>
#include <variant>
#include <vector>

#include "decomp/ast.hpp"

namespace decomp::interp {

// Reference tree-walking interpreter. It exists so transformations can be
// checked for behavioral equality (identical printed output on the same
// inputs); it is not part of the analysis pipeline.

struct Value;
using ValueList = std::vector<Value>;

struct Value {
    std::variant<long long, double, std::string, ValueList> data;

    bool is_int() const { return std::holds_alternative<long long>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_number() const { return is_int() || is_float(); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_list() const { return std::holds_alternative<ValueList>(data); }
    double as_number() const {
        return is_int() ? static_cast<double>(std::get<long long>(data)) : std::get<double>(data);
    }
};

std::string format_value(const Value& value);

struct RunResult {
    std::vector<std::string> output;  // one entry per print call
};

// Execute the program, reading input() values from `inputs` in order.
// Throws InterpError on type errors, exhausted inputs, division by zero,
// or exceeding the step limit.
RunResult run_program(const lang::Program& program, const std::vector<std::string>& inputs,
                      long long step_limit = 5'000'000);

}  // namespace decomp::interp
