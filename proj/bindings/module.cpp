#include <pybind11/pybind11.h>

#include "decomp/cli.hpp"
#include "decomp/metrics.hpp"
#include "decomp/parser.hpp"
#include "decomp/pipeline.hpp"
#include "decomp/render.hpp"

namespace py = pybind11;

namespace {

py::object json_loads(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

py::object analyze(const std::string& source) {
    decomp::Analysis analysis = decomp::analyze_source(source);
    py::dict out;
    out["ddg"] = json_loads(decomp::ddg::ddg_to_json(analysis.graph));
    out["plan"] = json_loads(decomp::split::plan_to_json(analysis.plan));
    out["partitions"] = analysis.coloring.color_count();
    out["dot"] = decomp::report::render_dot(analysis.graph, analysis.coloring);
    out["refactored"] = decomp::split::emit_refactored_source(analysis.plan, analysis.flat);
    py::list dead;
    for (int id : analysis.dead) dead.append(id);
    out["dead_code"] = dead;
    return out;
}

std::string split_source(const std::string& source) {
    decomp::Analysis analysis = decomp::analyze_source(source);
    return decomp::split::emit_refactored_source(analysis.plan, analysis.flat);
}

std::string render_dot(const std::string& source) {
    decomp::Analysis analysis = decomp::analyze_source(source);
    return decomp::report::render_dot(analysis.graph, analysis.coloring);
}

py::object measure_source(const std::string& source) {
    decomp::lang::Program program = decomp::lang::parse(source);
    decomp::metrics::Measurements m = decomp::metrics::measure(program);
    py::dict out;
    out["global_volume"] = m.global_volume;
    out["srp_violations"] = m.srp_violations;
    out["info_load"] = m.info_load;
    out["reuse_instances"] = m.reuse_instances;
    py::dict per_function;
    for (const auto& [name, stats] : m.per_function) {
        py::dict row;
        row["params"] = stats.params;
        row["returns"] = stats.returns;
        row["prints"] = stats.prints;
        row["calls"] = stats.calls;
        row["level"] = stats.level;
        per_function[py::str(name)] = row;
    }
    out["per_function"] = per_function;
    return out;
}

py::object score(const std::string& student_source, const std::string& reference_source,
                 py::object weights, int param_threshold) {
    decomp::lang::Program student = decomp::lang::parse(student_source);
    decomp::lang::Program reference = decomp::lang::parse(reference_source);
    if (reference.functions().empty()) {
        decomp::Analysis analysis = decomp::analyze_program(reference);
        reference = decomp::lang::parse(
            decomp::split::emit_refactored_source(analysis.plan, analysis.flat));
    }
    decomp::metrics::Weights w;
    if (!weights.is_none()) {
        auto seq = weights.cast<py::sequence>();
        for (size_t i = 0; i < 4 && i < static_cast<size_t>(py::len(seq)); ++i) {
            w.w[i] = seq[i].cast<double>();
        }
    }
    bool equivalent = decomp::equivalence_form(student)
                          .equivalent_to(decomp::equivalence_form(reference));
    decomp::metrics::Measurements cand = decomp::metrics::measure(student);
    decomp::metrics::Measurements ref = decomp::metrics::measure(reference);
    decomp::metrics::QualityReport report = decomp::metrics::compare(cand, ref, w, equivalent);
    decomp::metrics::Thresholds thresholds;
    thresholds.param_threshold = param_threshold;
    thresholds.reference = ref;
    report.findings = decomp::metrics::flag_findings(student, cand, thresholds);
    return json_loads(decomp::metrics::report_to_json(report));
}

std::string feedback(const std::string& student_source, const std::string& reference_source) {
    decomp::lang::Program student = decomp::lang::parse(student_source);
    decomp::lang::Program reference = decomp::lang::parse(reference_source);
    if (reference.functions().empty()) {
        decomp::Analysis analysis = decomp::analyze_program(reference);
        reference = decomp::lang::parse(
            decomp::split::emit_refactored_source(analysis.plan, analysis.flat));
    }
    bool equivalent = decomp::equivalence_form(student)
                          .equivalent_to(decomp::equivalence_form(reference));
    decomp::metrics::Measurements cand = decomp::metrics::measure(student);
    decomp::metrics::Measurements ref = decomp::metrics::measure(reference);
    decomp::metrics::QualityReport report =
        decomp::metrics::compare(cand, ref, decomp::metrics::Weights{}, equivalent);
    decomp::metrics::Thresholds thresholds;
    thresholds.reference = ref;
    report.findings = decomp::metrics::flag_findings(student, cand, thresholds);
    return decomp::report::render_feedback_md(report);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dependency-graph decomposition analysis of CS1-style procedural programs";

    py::register_exception<decomp::DiagnosticError>(m, "DiagnosticError", PyExc_ValueError);

    m.def("analyze", &analyze, py::arg("source"),
          "Full split pipeline: DDG, coloring, refined plan, DOT, refactored source.");
    m.def("split_source", &split_source, py::arg("source"),
          "Refactored source implementing the optimal decomposition.");
    m.def("render_dot", &render_dot, py::arg("source"), "Colored dependency graph in DOT.");
    m.def("measure", &measure_source, py::arg("source"), "The four decomposition measurements.");
    m.def("score", &score, py::arg("student"), py::arg("reference"),
          py::arg("weights") = py::none(), py::arg("param_threshold") = 4,
          "Reference-relative quality report as a dict.");
    m.def("feedback", &feedback, py::arg("student"), py::arg("reference"),
          "Markdown feedback for a submission.");
}
