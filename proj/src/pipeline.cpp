#include "decomp/pipeline.hpp"

#include "decomp/inliner.hpp"
#include "decomp/parser.hpp"

namespace decomp {

Analysis analyze_program(const lang::Program& program) {
    Analysis analysis;
    analysis.program = program;
    analysis.flat = ddg::inline_program(program);
    analysis.graph = ddg::build_ddg(analysis.flat);
    analysis.coloring = split::color(analysis.graph);
    analysis.duplicates = split::find_duplicates(analysis.graph);
    split::DecompositionPlan derived =
        split::derive_plan(analysis.graph, analysis.coloring, analysis.flat);
    analysis.plan = split::refine_plan(derived, analysis.duplicates, analysis.graph);
    analysis.canon = ddg::canonical_form(analysis.graph);
    analysis.dead = ddg::dead_code(analysis.graph);
    return analysis;
}

Analysis analyze_source(const std::string& source) {
    return analyze_program(lang::parse(source));
}

ddg::CanonicalForm equivalence_form(const lang::Program& program) {
    return ddg::canonical_form(ddg::build_ddg(ddg::inline_program(program)));
}

}  // namespace decomp
