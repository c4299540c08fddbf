#pragma once

#include <stdexcept>
#include <string>

namespace decomp {

// 1-based source position; length in characters.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

// Base for all diagnostics that point at source text.
class DiagnosticError : public std::runtime_error {
public:
    DiagnosticError(std::string kind, SourceSpan span, const std::string& message)
        : std::runtime_error(format(kind, span, message)),
          kind_(std::move(kind)),
          span_(span),
          message_(message) {}

    const std::string& kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    static std::string format(const std::string& kind, SourceSpan span, const std::string& message) {
        return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + kind + ": " + message;
    }

    std::string kind_;
    SourceSpan span_;
    std::string message_;
};

class LexError : public DiagnosticError {
public:
    LexError(SourceSpan span, const std::string& message) : DiagnosticError("lex error", span, message) {}
};

class ParseError : public DiagnosticError {
public:
    ParseError(SourceSpan span, const std::string& message) : DiagnosticError("parse error", span, message) {}
};

class SemanticError : public DiagnosticError {
public:
    SemanticError(SourceSpan span, const std::string& message)
        : DiagnosticError("semantic error", span, message) {}
};

class InlineError : public DiagnosticError {
public:
    InlineError(SourceSpan span, const std::string& message) : DiagnosticError("inline error", span, message) {}
};

class NoGoalsError : public DiagnosticError {
public:
    explicit NoGoalsError(const std::string& message = "program produces no output")
        : DiagnosticError("no goals", SourceSpan{}, message) {}
};

class InterpError : public DiagnosticError {
public:
    InterpError(SourceSpan span, const std::string& message) : DiagnosticError("interp error", span, message) {}
};

class WeightError : public std::runtime_error {
public:
    explicit WeightError(const std::string& message) : std::runtime_error(message) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace decomp
