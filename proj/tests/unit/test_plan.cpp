#include "doctest.h"

#include <random>

#include "decomp/canonical.hpp"
#include "decomp/inliner.hpp"
#include "decomp/interp.hpp"
#include "decomp/parser.hpp"
#include "decomp/pipeline.hpp"
#include "decomp/plan.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include "json.hpp"

using namespace decomp;
using namespace decomp::split;

namespace {

const PlannedFunction* find_function(const DecompositionPlan& plan, const std::string& name) {
    for (const auto& fn : plan.functions) {
        if (fn.suggested_name == name) return &fn;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("garden: the shared function carries circle_area to three consumers") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("garden.src"));
    const PlannedFunction* shared = find_function(analysis.plan, "circle_area");
    REQUIRE(shared != nullptr);
    CHECK(shared->rationale == Rationale::Shared);
    CHECK(shared->params == std::vector<std::string>{"side_length"});
    CHECK(shared->returns == std::vector<std::string>{"circle_area"});

    int consumers = 0;
    for (const auto& edge : analysis.plan.cross_edges) {
        if (edge.datum == "circle_area") ++consumers;
    }
    CHECK(consumers >= 3);
}

TEST_CASE("two-color chain: the goal function takes the source as its one parameter") {
    Analysis analysis = analyze_source("x = input()\ny = x * 2\nprint(y)\n");
    REQUIRE(analysis.plan.functions.size() == 1);
    const PlannedFunction& fn = analysis.plan.functions[0];
    CHECK(fn.rationale == Rationale::Subtask);
    CHECK(fn.params == std::vector<std::string>{"x"});
    CHECK(fn.returns.empty());
}

TEST_CASE("diamond: shared has one param and one return; consumers take it") {
    const char* src =
        "a = input()\n"
        "b = a + a\n"
        "c = b + 1\n"
        "print(c)\n"
        "d = b + 2\n"
        "print(d)\n";
    Analysis analysis = analyze_source(src);
    const PlannedFunction* shared = find_function(analysis.plan, "b");
    REQUIRE(shared != nullptr);
    CHECK(shared->params.size() == 1);
    CHECK(shared->returns.size() == 1);
    const PlannedFunction* c_fn = find_function(analysis.plan, "c");
    const PlannedFunction* d_fn = find_function(analysis.plan, "d");
    REQUIRE(c_fn != nullptr);
    REQUIRE(d_fn != nullptr);
    CHECK(c_fn->params == std::vector<std::string>{"b"});
    CHECK(d_fn->params == std::vector<std::string>{"b"});
}

TEST_CASE("parameters never overlap returns and are always used") {
    for (const auto& entry : testsupport::corpus_programs()) {
        Analysis analysis = analyze_source(testsupport::read_corpus_file(entry.name));
        for (const auto& fn : analysis.plan.functions) {
            std::set<std::string> params(fn.params.begin(), fn.params.end());
            for (const auto& r : fn.returns) {
                CHECK_MESSAGE(!params.count(r), fn.suggested_name, " returns a parameter");
            }
            // Parameter minimality: every parameter is read by some statement
            // or call in the body.
            std::set<std::string> used;
            for (const auto& item : fn.body) {
                if (item.call) {
                    for (const auto& a : item.call->args) used.insert(a);
                    continue;
                }
                const auto& node = analysis.graph.node(item.node);
                for (const auto& read : node.reads) {
                    used.insert(analysis.plan.name_of(read.producer, read.value));
                }
            }
            if (!fn.literal_body.empty()) continue;  // helper bodies use all params by construction
            for (const auto& p : fn.params) {
                CHECK_MESSAGE(used.count(p), fn.suggested_name, " has unused parameter ", p);
            }
        }
    }
}

TEST_CASE("garden refinement collapses the factor-2 pair into one helper called twice") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("garden.src"));
    const PlannedFunction* helper = find_function(analysis.plan, "plants");
    REQUIRE(helper != nullptr);
    CHECK(helper->rationale == Rationale::DuplicationCollapse);

    const PlannedFunction* goal = find_function(analysis.plan, "total_plants");
    REQUIRE(goal != nullptr);
    int call_sites = 0;
    bool wrapped_site = false;
    for (const auto& item : goal->body) {
        if (item.call && item.call->function == "plants") {
            ++call_sites;
            if (item.call->wrapped) {
                wrapped_site = true;
                CHECK(item.call->wrap_op == lang::BinOp::FloorDiv);
                CHECK(item.call->wrap_literal == "2");
            }
        }
    }
    CHECK(call_sites == 2);
    CHECK(wrapped_site);
}

TEST_CASE("plans without duplicates or tags are unchanged by refinement") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("trip_cost.src"));
    for (const auto& fn : analysis.plan.functions) {
        CHECK(fn.rationale != Rationale::DuplicationCollapse);
        CHECK(fn.rationale != Rationale::DataProcessing);
    }
    CHECK(analysis.plan.conflicts.empty());
}

TEST_CASE("drive times: the aggregation stage is isolated") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("drive_times.src"));
    int data_processing = 0;
    for (const auto& fn : analysis.plan.functions) {
        if (fn.rationale == Rationale::DataProcessing) ++data_processing;
    }
    CHECK(data_processing >= 1);
}

TEST_CASE("emitted source reparses and re-decomposes cleanly") {
    for (const auto& entry : testsupport::corpus_programs()) {
        Analysis analysis = analyze_source(testsupport::read_corpus_file(entry.name));
        std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
        CHECK_NOTHROW(lang::parse(emitted));
    }
}

TEST_CASE("semantic preservation: emitted source inlines back to the original form") {
    for (const auto& entry : testsupport::corpus_programs()) {
        Analysis analysis = analyze_source(testsupport::read_corpus_file(entry.name));
        std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
        ddg::CanonicalForm round_trip = equivalence_form(lang::parse(emitted));
        CHECK_MESSAGE(analysis.canon.equivalent_to(round_trip), "canonical drift in ", entry.name);
    }
}

TEST_CASE("plan json carries functions, main wiring, and cross edges") {
    Analysis analysis = analyze_source(testsupport::read_corpus_file("garden.src"));
    auto json = nlohmann::json::parse(plan_to_json(analysis.plan));
    REQUIRE(json.contains("functions"));
    REQUIRE(json.contains("main"));
    REQUIRE(json.contains("cross_edges"));
    bool saw_collapse = false;
    for (const auto& fn : json["functions"]) {
        CHECK(fn.contains("name"));
        CHECK(fn.contains("params"));
        CHECK(fn.contains("returns"));
        CHECK(fn.contains("statements"));
        CHECK(fn.contains("rationale"));
        if (fn["rationale"] == "duplication_collapse") saw_collapse = true;
    }
    CHECK(saw_collapse);
    CHECK(json["main"].size() >= 5);
}

TEST_CASE("goal print order is preserved through main wiring") {
    for (const auto& entry : testsupport::corpus_programs()) {
        if (!entry.input_spec.empty()) continue;
        lang::Program original = lang::parse(testsupport::read_corpus_file(entry.name));
        Analysis analysis = analyze_program(original);
        std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
        auto a = interp::run_program(original, {});
        auto b = interp::run_program(lang::parse(emitted), {});
        CHECK_MESSAGE(a.output == b.output, "output drift in ", entry.name);
    }
}

TEST_CASE("diamond and single-goal emissions round-trip to the same digest") {
    const char* diamond =
        "a = input()\n"
        "b = a + a\n"
        "c = b + 1\n"
        "print(c)\n"
        "d = b + 2\n"
        "print(d)\n";
    Analysis analysis = analyze_source(diamond);
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    CHECK(analysis.canon.equivalent_to(equivalence_form(lang::parse(emitted))));

    Analysis chain = analyze_source("x = 4\nprint(x * x)\n");
    std::string chain_src = emit_refactored_source(chain.plan, chain.flat);
    lang::Program reparsed = lang::parse(chain_src);
    CHECK(reparsed.functions().size() == 2);  // the goal function plus main
    CHECK(chain.canon.equivalent_to(equivalence_form(reparsed)));
}

TEST_CASE("decomposed inputs are re-decomposed through inlining") {
    Analysis analysis =
        analyze_source(testsupport::read_corpus_file("students/garden_ex1.src"));
    CHECK(analysis.coloring.color_count() == 5);
    ddg::CanonicalForm garden =
        equivalence_form(lang::parse(testsupport::read_corpus_file("garden.src")));
    CHECK(analysis.canon.equivalent_to(garden));
}

TEST_CASE("swap through a multi-assignment survives emission") {
    const char* src =
        "a = 1\n"
        "b = 2\n"
        "a, b = b, a\n"
        "print(a)\n"
        "print(b)\n";
    lang::Program original = lang::parse(src);
    Analysis analysis = analyze_program(original);
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    auto expected = interp::run_program(original, {});
    auto actual = interp::run_program(lang::parse(emitted), {});
    REQUIRE(expected.output.size() == 2);
    CHECK(expected.output[0] == "2");
    CHECK(expected.output[1] == "1");
    CHECK(actual.output == expected.output);
}

TEST_CASE("reassigned variables emit distinct version names") {
    const char* src =
        "x = 1\n"
        "print(x)\n"
        "x = x + 1\n"
        "print(x)\n";
    lang::Program original = lang::parse(src);
    Analysis analysis = analyze_program(original);
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    CHECK(emitted.find("x_v2") != std::string::npos);
    auto expected = interp::run_program(original, {});
    auto actual = interp::run_program(lang::parse(emitted), {});
    CHECK(actual.output == expected.output);
}

TEST_CASE("hoist conflicts are reported and skipped, not miscompiled") {
    // The two tagged statements sandwich an untagged dependency, so pulling
    // them into one stage would read `count` before it exists.
    const char* src =
        "line = input(\"? \")\n"
        "vals = split(line)\n"
        "count = len(vals)\n"
        "label = str(count) + str(len(vals))\n"
        "print(label)\n";
    lang::Program original = lang::parse(src);
    Analysis analysis = analyze_program(original);
    CHECK(!analysis.plan.conflicts.empty());
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    CHECK(analysis.canon.equivalent_to(equivalence_form(lang::parse(emitted))));
    auto a = interp::run_program(original, {"10 20 30"});
    auto b = interp::run_program(lang::parse(emitted), {"10 20 30"});
    CHECK(a.output == b.output);
}

TEST_CASE("plan json is byte-stable across pipeline runs") {
    std::string source = testsupport::read_corpus_file("drive_times.src");
    Analysis a = analyze_source(source);
    Analysis b = analyze_source(source);
    CHECK(plan_to_json(a.plan) == plan_to_json(b.plan));
    CHECK(emit_refactored_source(a.plan, a.flat) == emit_refactored_source(b.plan, b.flat));
}

TEST_CASE("a variable named main cannot collide with the orchestrator") {
    const char* src =
        "main = 3\n"
        "print(main)\n"
        "extra = main + 1\n"
        "print(extra)\n";
    lang::Program original = lang::parse(src);
    Analysis analysis = analyze_program(original);
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    lang::Program reparsed = lang::parse(emitted);  // no duplicate definition
    CHECK(analysis.canon.equivalent_to(equivalence_form(reparsed)));
    for (const auto& fn : analysis.plan.functions) {
        CHECK(fn.suggested_name != "main");
    }
}

TEST_CASE("random straight-line programs survive the whole pipeline") {
    std::mt19937 rng(1029384756);
    for (int trial = 0; trial < 200; ++trial) {
        std::string source = testsupport::random_program(rng);
        CAPTURE(source);
        lang::Program original = lang::parse(source);
        Analysis analysis = analyze_program(original);
        std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
        lang::Program reparsed = lang::parse(emitted);
        REQUIRE(analysis.canon.equivalent_to(equivalence_form(reparsed)));
        auto a = interp::run_program(original, {});
        auto b = interp::run_program(reparsed, {});
        REQUIRE(a.output == b.output);
    }
}

TEST_CASE("aliased leaves collapse to one parameter without dangling calls") {
    // v4 spells the same subtraction through an alias of v0, so the group
    // has one distinct leaf per member and one helper parameter.
    const char* src =
        "v0 = 7\n"
        "v2 = v0\n"
        "v3 = v0 - v0\n"
        "v4 = v2 - v0\n"
        "print(v3)\n"
        "print(v4)\n";
    lang::Program original = lang::parse(src);
    Analysis analysis = analyze_program(original);
    std::string emitted = emit_refactored_source(analysis.plan, analysis.flat);
    lang::Program reparsed = lang::parse(emitted);  // every called helper must exist
    CHECK(analysis.canon.equivalent_to(equivalence_form(reparsed)));
    auto a = interp::run_program(original, {});
    auto b = interp::run_program(reparsed, {});
    CHECK(a.output == b.output);
    for (const auto& fn : analysis.plan.functions) {
        if (fn.rationale == Rationale::DuplicationCollapse) {
            CHECK(fn.params.size() == 1);
        }
    }
}
