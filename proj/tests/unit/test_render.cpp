#include "doctest.h"

#include "decomp/parser.hpp"
#include "decomp/pipeline.hpp"
#include "decomp/render.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace decomp;
using namespace decomp::report;

TEST_CASE("garden DOT: five fill colors, red shared, bold cross edges") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("garden.src"));
    std::string dot = render_dot(analysis.graph, analysis.coloring);

    std::string error;
    CHECK_MESSAGE(testsupport::dot_is_well_formed(dot, &error), error);

    for (const auto& color : {"gray", "yellow", "purple", "green", "red"}) {
        CHECK_MESSAGE(dot.find(std::string("fillcolor=\"") + color + "\"") != std::string::npos,
                      "missing palette color ", color);
    }
    // The shared circle_area function renders red (after the goal hues).
    split::ColorId shared = analysis.coloring.shared_colors[0];
    int circle_area = -1;
    for (const auto& node : analysis.graph.nodes) {
        if (node.label == "circle_area") circle_area = node.id;
    }
    REQUIRE(circle_area >= 0);
    CHECK(analysis.coloring.color_of(circle_area) == shared);
    std::string needle = "n" + std::to_string(circle_area) + " [label=\"circle_area\"";
    size_t at = dot.find(needle);
    REQUIRE(at != std::string::npos);
    CHECK(dot.find("fillcolor=\"red\"", at) != std::string::npos);
    CHECK(dot.find("penwidth=2.0") != std::string::npos);
}

TEST_CASE("two-node chain renders two colors and one bold edge") {
    Analysis analysis = analyze_source("x = input()\nprint(x)\n");
    std::string dot = render_dot(analysis.graph, analysis.coloring);
    CHECK(testsupport::dot_is_well_formed(dot));
    CHECK(dot.find("fillcolor=\"gray\"") != std::string::npos);
    CHECK(dot.find("fillcolor=\"yellow\"") != std::string::npos);
    CHECK(dot.find("penwidth=2.0") != std::string::npos);
}

TEST_CASE("every corpus DOT parses under the grammar checker") {
    for (const auto& entry : testsupport::corpus_programs()) {
        Analysis analysis = analyze_source(testsupport::read_corpus_file(entry.name));
        std::string dot = render_dot(analysis.graph, analysis.coloring);
        std::string error;
        CHECK_MESSAGE(testsupport::dot_is_well_formed(dot, &error), entry.name, ": ", error);
    }
}

TEST_CASE("palette exhaustion falls back to generated colors") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("owls.src"));
    RenderOptions options;
    options.palette = {"gray", "yellow"};
    std::string dot = render_dot(analysis.graph, analysis.coloring, options);
    CHECK(testsupport::dot_is_well_formed(dot));
    CHECK(dot.find("0.") != std::string::npos);  // HSV fallback triple
}

TEST_CASE("rendering is byte-stable") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("garden.src"));
    CHECK(render_dot(analysis.graph, analysis.coloring) ==
          render_dot(analysis.graph, analysis.coloring));
}

TEST_CASE("frames: goals plus collisions, final frame equals the final rendering") {
    Analysis garden = analyze_source(testsupport::read_corpus_file("garden.src"));
    auto frames = render_frames(garden.graph);
    CHECK(frames.size() == 4);  // 3 goals + 1 collision
    CHECK(frames.back() == render_dot(garden.graph, garden.coloring));
    for (const auto& frame : frames) {
        std::string error;
        CHECK_MESSAGE(testsupport::dot_is_well_formed(frame, &error), error);
        for (const auto& node : garden.graph.nodes) {
            std::string id = "\n  n" + std::to_string(node.id) + " [label";
            size_t first = frame.find(id);
            REQUIRE(first != std::string::npos);
            CHECK(frame.find(id, first + 1) == std::string::npos);
        }
    }

    Analysis chain = analyze_source("x = input()\nprint(x)\n");
    auto chain_frames = render_frames(chain.graph);
    CHECK(chain_frames.size() == 1);
    CHECK(chain_frames.back() == render_dot(chain.graph, chain.coloring));

    Analysis diamond = analyze_source(
        "a = input()\n"
        "b = a + a\n"
        "c = b + 1\n"
        "print(c)\n"
        "d = b + 2\n"
        "print(d)\n");
    auto diamond_frames = render_frames(diamond.graph);
    CHECK(diamond_frames.size() == 3);  // goal, goal-with-collision, finalize
    CHECK(diamond_frames.back() == render_dot(diamond.graph, diamond.coloring));
}

TEST_CASE("feedback markdown: identity comparison and violation reporting") {
    lang::Program reference =
        lang::parse(testsupport::read_corpus_file("reference/garden_solution.src"));
    metrics::Measurements ref = metrics::measure(reference);
    metrics::QualityReport identity = metrics::compare(ref, ref);
    std::string md = render_feedback_md(identity);
    CHECK(md.find("1.00") != std::string::npos);
    CHECK(md.find("No findings.") != std::string::npos);
    CHECK(render_feedback_md(identity) == md);  // byte-identical across runs

    lang::Program student =
        lang::parse(testsupport::read_corpus_file("students/garden_ex1.src"));
    metrics::Measurements cand = metrics::measure(student);
    metrics::QualityReport report = metrics::compare(cand, ref);
    report.findings = metrics::flag_findings(student, cand, {});
    std::string feedback = render_feedback_md(report);
    CHECK(feedback.find("plants") != std::string::npos);
    CHECK(feedback.find("line 1") != std::string::npos);

    metrics::QualityReport warned = metrics::compare(cand, ref, {}, false);
    CHECK(render_feedback_md(warned).find("Warning") != std::string::npos);
}
