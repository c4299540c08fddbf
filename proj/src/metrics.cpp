#include "decomp/metrics.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace decomp::metrics {

using lang::CallExpr;
using lang::Expr;
using lang::FunctionDef;
using lang::Program;
using lang::Stmt;

namespace {

int count_calls_to(const FunctionDef& def, const std::string& name) {
    int count = 0;
    for (const Stmt& stmt : def.body) {
        lang::for_each_expr(stmt, [&](const Expr& e) {
            if (e.is<CallExpr>() && e.as<CallExpr>().callee == name) ++count;
        });
    }
    return count;
}

struct MainShape {
    std::string def_name;             // nonempty: a function named main exists
    std::vector<size_t> trailing;     // else: indices of the trailing bare-call run
};

MainShape detect_main(const Program& program) {
    MainShape shape;
    if (program.find_function("main")) {
        shape.def_name = "main";
        return shape;
    }
    // The virtual main: a maximal trailing run of bare user-function calls.
    std::set<std::string> user;
    for (const auto* def : program.functions()) user.insert(def->name);
    for (size_t i = program.items.size(); i-- > 0;) {
        const auto& item = program.items[i];
        if (item.is_function()) break;
        const Stmt& stmt = item.statement();
        if (!stmt.is<lang::ExprStmt>()) break;
        const Expr& expr = stmt.as<lang::ExprStmt>().expr;
        if (!expr.is<CallExpr>() || !user.count(expr.as<CallExpr>().callee)) break;
        shape.trailing.push_back(i);
    }
    return shape;
}

}  // namespace

Measurements measure(const Program& program) {
    Measurements m;
    MainShape main_shape = detect_main(program);
    std::set<size_t> excluded(main_shape.trailing.begin(), main_shape.trailing.end());

    // Global volume: executable globals, minus defs, minus the orchestrator
    // (a single trailing main() call, or the virtual-main call run).
    std::vector<size_t> global_indices;
    for (size_t i = 0; i < program.items.size(); ++i) {
        if (!program.items[i].is_function()) global_indices.push_back(i);
    }
    if (!main_shape.def_name.empty() && !global_indices.empty()) {
        size_t last = global_indices.back();
        const Stmt& stmt = program.items[last].statement();
        if (last == program.items.size() - 1 && stmt.is<lang::ExprStmt>()) {
            const Expr& expr = stmt.as<lang::ExprStmt>().expr;
            if (expr.is<CallExpr>() && expr.as<CallExpr>().callee == "main") {
                excluded.insert(last);
            }
        }
    }
    for (size_t i : global_indices) {
        if (!excluded.count(i)) ++m.global_volume;
    }

    // Per-function stats and the user call graph.
    std::map<std::string, std::set<std::string>> callees;
    std::set<std::string> user;
    for (const auto* def : program.functions()) user.insert(def->name);
    for (const auto* def : program.functions()) {
        FunctionStats stats;
        stats.params = static_cast<int>(def->params.size());
        stats.returns = def->return_arity;
        stats.prints = count_calls_to(*def, "print");
        for (const Stmt& stmt : def->body) {
            lang::for_each_expr(stmt, [&](const Expr& e) {
                if (e.is<CallExpr>() && user.count(e.as<CallExpr>().callee)) {
                    ++stats.calls;
                    callees[def->name].insert(e.as<CallExpr>().callee);
                }
            });
        }
        m.per_function[def->name] = stats;
    }

    // Abstraction levels (the call graph is a DAG).
    std::map<std::string, int> level;
    std::function<int(const std::string&)> level_of = [&](const std::string& name) -> int {
        auto it = level.find(name);
        if (it != level.end()) return it->second;
        int result = 0;
        for (const auto& callee : callees[name]) {
            result = std::max(result, 1 + level_of(callee));
        }
        level[name] = result;
        return result;
    };
    for (auto& [name, stats] : m.per_function) stats.level = level_of(name);

    for (const auto& [name, stats] : m.per_function) {
        m.info_load += stats.params + stats.returns;
        if (name != "main" && stats.prints > 0 && stats.returns > 0) ++m.srp_violations;
    }

    // Reuse: level-0 utilities statically invoked from >= 2 distinct
    // functions; main (literal or virtual) does not count as a caller.
    std::map<std::string, std::set<std::string>> callers;
    for (const auto& [caller, names] : callees) {
        if (caller == "main") continue;
        for (const auto& callee : names) callers[callee].insert(caller);
    }
    for (const auto& [name, stats] : m.per_function) {
        if (name == "main" || stats.level != 0) continue;
        if (callers[name].size() >= 2) ++m.reuse_instances;
    }
    return m;
}

QualityReport compare(const Measurements& candidate, const Measurements& reference,
                      const Weights& weights, bool equivalent) {
    double total_weight = 0;
    for (double w : weights.w) {
        if (w < 0) throw WeightError("weights must be nonnegative");
        total_weight += w;
    }
    if (total_weight == 0) throw WeightError("at least one weight must be positive");

    QualityReport report;
    report.candidate = candidate;
    report.reference = reference;
    report.weights = weights;
    report.equivalent = equivalent;

    auto lower_better = [](int cand, int ref) {
        return (1.0 + ref) / (1.0 + std::max(ref, cand));
    };
    report.subscores[0] = lower_better(candidate.global_volume, reference.global_volume);
    report.subscores[1] = lower_better(candidate.srp_violations, reference.srp_violations);
    report.subscores[2] = lower_better(candidate.info_load, reference.info_load);
    report.subscores[3] =
        reference.reuse_instances > 0
            ? static_cast<double>(std::min(candidate.reuse_instances, reference.reuse_instances)) /
                  reference.reuse_instances
            : 1.0;

    double acc = 0;
    for (size_t i = 0; i < 4; ++i) acc += weights.w[i] * report.subscores[i];
    report.composite = acc / total_weight;
    return report;
}

std::vector<Finding> flag_findings(const Program& program, const Measurements& measurements,
                                   const Thresholds& thresholds) {
    std::vector<Finding> findings;
    for (const auto* def : program.functions()) {
        auto it = measurements.per_function.find(def->name);
        if (it == measurements.per_function.end()) continue;
        const FunctionStats& stats = it->second;
        if (def->name != "main" && stats.prints > 0 && stats.returns > 0) {
            findings.push_back(Finding{"srp_violations", def->span.line, def->span.column,
                                       "function '" + def->name + "' both prints and returns a value"});
        }
        if (stats.params > thresholds.param_threshold) {
            findings.push_back(Finding{"info_load", def->span.line, def->span.column,
                                       "function '" + def->name + "' takes " +
                                           std::to_string(stats.params) + " parameters (threshold " +
                                           std::to_string(thresholds.param_threshold) + ")"});
        }
    }
    MainShape main_shape = detect_main(program);
    std::set<size_t> excluded(main_shape.trailing.begin(), main_shape.trailing.end());
    for (size_t i = 0; i < program.items.size(); ++i) {
        if (program.items[i].is_function()) continue;
        if (excluded.count(i)) continue;
        const Stmt& stmt = program.items[i].statement();
        if (!main_shape.def_name.empty() && i == program.items.size() - 1 &&
            stmt.is<lang::ExprStmt>() && stmt.as<lang::ExprStmt>().expr.is<CallExpr>() &&
            stmt.as<lang::ExprStmt>().expr.as<CallExpr>().callee == "main") {
            continue;
        }
        findings.push_back(Finding{"global_volume", stmt.span.line, stmt.span.column,
                                   "executable statement at global scope"});
    }
    if (thresholds.reference &&
        measurements.reuse_instances < thresholds.reference->reuse_instances) {
        findings.push_back(
            Finding{"reuse_instances", 1, 1,
                    "reference reuses " + std::to_string(thresholds.reference->reuse_instances) +
                        " utility function(s); submission reuses " +
                        std::to_string(measurements.reuse_instances)});
    }
    return findings;
}

namespace {

nlohmann::json measurements_json(const Measurements& m) {
    nlohmann::json out;
    out["global_volume"] = m.global_volume;
    out["srp_violations"] = m.srp_violations;
    out["info_load"] = m.info_load;
    out["reuse_instances"] = m.reuse_instances;
    out["per_function"] = nlohmann::json::object();
    for (const auto& [name, stats] : m.per_function) {
        out["per_function"][name] = {{"params", stats.params},
                                     {"returns", stats.returns},
                                     {"prints", stats.prints},
                                     {"calls", stats.calls},
                                     {"level", stats.level}};
    }
    return out;
}

}  // namespace

std::string report_to_json(const QualityReport& report) {
    nlohmann::json out;
    out["candidate"] = measurements_json(report.candidate);
    out["reference"] = measurements_json(report.reference);
    out["subscores"] = {{"s1", report.subscores[0]},
                        {"s2", report.subscores[1]},
                        {"s3", report.subscores[2]},
                        {"s4", report.subscores[3]}};
    out["composite"] = report.composite;
    out["findings"] = nlohmann::json::array();
    for (const auto& finding : report.findings) {
        out["findings"].push_back({{"metric", finding.metric},
                                   {"line", finding.line},
                                   {"col", finding.column},
                                   {"message", finding.message}});
    }
    out["equivalent"] = report.equivalent;
    return out.dump(2);
}

}  // namespace decomp::metrics
