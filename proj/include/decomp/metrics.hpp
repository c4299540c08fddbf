#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decomp/ast.hpp"

namespace decomp::metrics {

struct FunctionStats {
    int params = 0;
    int returns = 0;  // return arity
    int prints = 0;   // print call sites anywhere in the body
    int calls = 0;    // user-function call sites
    int level = 0;    // 0: calls no user functions; else 1 + max callee level
};

struct Measurements {
    int global_volume = 0;    // executable global statements (defs and the trailing main call excluded)
    int srp_violations = 0;   // functions that both print and return values
    int info_load = 0;        // sum of (param count + return arity)
    int reuse_instances = 0;  // level-0 functions called by >= 2 distinct functions
    std::map<std::string, FunctionStats> per_function;
};

struct Weights {
    std::array<double, 4> w{1, 1, 1, 1};
};

struct Finding {
    std::string metric;
    int line = 1;
    int column = 1;
    std::string message;
};

struct QualityReport {
    Measurements candidate;
    Measurements reference;
    std::array<double, 4> subscores{1, 1, 1, 1};
    Weights weights;
    double composite = 1.0;
    bool equivalent = true;
    std::vector<Finding> findings;
};

// The four decomposition measurements of one program. `main` is a function
// literally named main, else the trailing run of bare user-function calls;
// it is excluded from SRP and reuse counting.
Measurements measure(const lang::Program& program);

// Reference-relative scoring. Lower-is-better metrics score
// (1+ref)/(1+max(ref,cand)); reuse scores min(cand,ref)/ref (1 when the
// reference has none). Throws WeightError when all weights are zero.
QualityReport compare(const Measurements& candidate, const Measurements& reference,
                      const Weights& weights = {}, bool equivalent = true);

struct Thresholds {
    int param_threshold = 4;
    std::optional<Measurements> reference;
};

std::vector<Finding> flag_findings(const lang::Program& program, const Measurements& measurements,
                                   const Thresholds& thresholds = {});

// Report with measurements, subscores, composite, findings, equivalence.
std::string report_to_json(const QualityReport& report);

}  // namespace decomp::metrics
