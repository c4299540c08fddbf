#include "doctest.h"

#include "decomp/ddg.hpp"
#include "decomp/parser.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include "json.hpp"

using namespace decomp;
using namespace decomp::ddg;

namespace {

const DdgNode* node_labeled(const Ddg& graph, const std::string& label) {
    for (const auto& node : graph.nodes) {
        if (node.label == label) return &node;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("input to print is a two-node chain") {
    Ddg graph = build_ddg(lang::parse("x = input()\nprint(x)\n"));
    REQUIRE(graph.nodes.size() == 2);
    CHECK(graph.nodes[0].kind == NodeKind::Source);
    CHECK(graph.nodes[0].origin == SourceOrigin::Input);
    CHECK(graph.nodes[1].kind == NodeKind::Goal);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0] == std::make_pair(0, 1));
}

TEST_CASE("duplicate reads collapse to a single edge") {
    Ddg graph = build_ddg(lang::parse("a = 1\nb = a + a\nprint(b)\n"));
    CHECK(graph.nodes.size() == 3);
    CHECK(graph.edges.size() == 2);  // a->b, b->goal
    // Oracle: brute-force read extraction agrees on the read set.
    lang::Program program = lang::parse("a = 1\nb = a + a\nprint(b)\n");
    auto reads = testsupport::brute_force_reads(*program.global_statements()[1]);
    CHECK(reads == std::set<std::string>{"a"});
    const DdgNode* b = node_labeled(graph, "b");
    REQUIRE(b != nullptr);
    CHECK(b->reads.size() == 1);
}

TEST_CASE("garden: circle_area feeds all three goal subgraphs") {
    Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file("garden.src")));
    const DdgNode* circle_area = node_labeled(graph, "circle_area");
    REQUIRE(circle_area != nullptr);
    CHECK(graph.succs[static_cast<size_t>(circle_area->id)].size() >= 2);

    // Each goal's ancestor closure contains circle_area.
    auto reach = testsupport::reachable_goals(graph);
    CHECK(reach[static_cast<size_t>(circle_area->id)].size() == 3);
    CHECK(graph.goal_order.size() == 3);
}

TEST_CASE("named literals become sources, folded literals do not") {
    Ddg graph = build_ddg(lang::parse("pi = 3.14159\nr = 2\narea = pi * r ** 2\nprint(area)\n"));
    const DdgNode* pi = node_labeled(graph, "pi");
    REQUIRE(pi != nullptr);
    CHECK(pi->kind == NodeKind::Source);
    CHECK(pi->origin == SourceOrigin::Constant);
    const DdgNode* area = node_labeled(graph, "area");
    REQUIRE(area != nullptr);
    CHECK(area->kind == NodeKind::Computation);
    // The exponent 2 folds into area's op tree: only pi and r are read.
    CHECK(area->reads.size() == 2);
}

TEST_CASE("SSA: reassignment creates a new version downstream") {
    Ddg graph = build_ddg(lang::parse("x = 1\ny = x + 1\nx = y + 1\nprint(x)\n"));
    int x_nodes = 0;
    for (const auto& node : graph.nodes) {
        if (node.label == "x") ++x_nodes;
    }
    CHECK(x_nodes == 2);
    // The goal reads the second version.
    const DdgNode& goal = graph.node(graph.goal_order[0]);
    int producer = goal.producer_of("x");
    CHECK(graph.node(producer).version == 2);
}

TEST_CASE("topological soundness: producers precede consumers") {
    for (const auto& entry : testsupport::corpus_programs()) {
        Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file(entry.name)));
        for (const auto& [from, to] : graph.edges) {
            CHECK(from < to);
        }
    }
}

TEST_CASE("dead code: unused assignments are reported in source order") {
    Ddg graph = build_ddg(lang::parse("tmp = 5\nx = 1\nprint(x)\n"));
    auto dead = dead_code(graph);
    REQUIRE(dead.size() == 1);
    CHECK(graph.node(dead[0]).label == "tmp");

    Ddg two = build_ddg(lang::parse("tmp = 5\nother = tmp + 1\nx = 1\nprint(x)\nunused = 2\n"));
    auto dead2 = dead_code(two);
    REQUIRE(dead2.size() == 3);
    CHECK(two.node(dead2[0]).label == "tmp");
    CHECK(two.node(dead2[1]).label == "other");
    CHECK(two.node(dead2[2]).label == "unused");
}

TEST_CASE("garden has no dead code") {
    Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file("garden.src")));
    CHECK(dead_code(graph).empty());
}

TEST_CASE("compound blocks become single multi-output nodes") {
    Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file("savings.src")));
    const DdgNode* loop = node_labeled(graph, "loop");
    REQUIRE(loop != nullptr);
    CHECK(loop->outputs == std::vector<std::string>{"balance", "years"});
    CHECK(loop->reads.size() == 4);  // balance, goal, rate, years
}

TEST_CASE("blocks consuming split results are tagged data_processing") {
    Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file("drive_times.src")));
    const DdgNode* times = node_labeled(graph, "times");
    REQUIRE(times != nullptr);
    CHECK(times->tags.count("data_processing") == 1);
    int tagged_blocks = 0;
    for (const auto& node : graph.nodes) {
        if (node.block && node.tags.count("data_processing")) ++tagged_blocks;
    }
    CHECK(tagged_blocks == 2);
}

TEST_CASE("printing blocks get a synthesized goal") {
    const char* src =
        "names = split(\"ann bob\")\n"
        "for n in names:\n"
        "    print(n)\n";
    Ddg graph = build_ddg(lang::parse(src));
    REQUIRE(graph.goal_order.size() == 1);
    const DdgNode& goal = graph.node(graph.goal_order[0]);
    CHECK(goal.is_phantom_goal());
    CHECK(graph.node(goal.block_goal_of).block.has_value());
}

TEST_CASE("graphs built on decomposed programs are rejected") {
    lang::Program program =
        lang::parse(testsupport::read_corpus_file("reference/garden_solution.src"));
    CHECK_THROWS_AS(build_ddg(program), SemanticError);
}

TEST_CASE("ddg json has the documented shape and stable ids") {
    Ddg graph = build_ddg(lang::parse(testsupport::read_corpus_file("garden.src")));
    auto json = nlohmann::json::parse(ddg_to_json(graph));
    REQUIRE(json.contains("nodes"));
    REQUIRE(json.contains("edges"));
    REQUIRE(json.contains("goal_order"));
    CHECK(json["nodes"].size() == graph.nodes.size());
    for (size_t i = 0; i < json["nodes"].size(); ++i) {
        CHECK(json["nodes"][i]["id"] == static_cast<int>(i));
        CHECK(json["nodes"][i].contains("kind"));
        CHECK(json["nodes"][i].contains("label"));
        CHECK(json["nodes"][i].contains("tags"));
        CHECK(json["nodes"][i]["span"].contains("line"));
    }
    CHECK(ddg_to_json(graph) == ddg_to_json(graph));
}
