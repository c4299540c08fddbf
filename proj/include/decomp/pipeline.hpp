#pragma once

#include <string>
#include <vector>

#include "decomp/canonical.hpp"
#include "decomp/coloring.hpp"
#include "decomp/ddg.hpp"
#include "decomp/duplicates.hpp"
#include "decomp/plan.hpp"

namespace decomp {

// Everything the split pipeline computes for one program.
struct Analysis {
    lang::Program program;  // as written
    lang::Program flat;     // after inlining user functions
    ddg::Ddg graph;
    split::Coloring coloring;
    std::vector<split::DuplicateGroup> duplicates;
    split::DecompositionPlan plan;  // refined
    ddg::CanonicalForm canon;
    std::vector<int> dead;
};

Analysis analyze_program(const lang::Program& program);
Analysis analyze_source(const std::string& source);

// Canonical form of a program's behavior: inline, build the graph, digest.
ddg::CanonicalForm equivalence_form(const lang::Program& program);

}  // namespace decomp
