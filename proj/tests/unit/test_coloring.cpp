#include "doctest.h"

#include <random>

#include "decomp/coloring.hpp"
#include "decomp/ddg.hpp"
#include "decomp/parser.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace decomp;
using namespace decomp::split;

namespace {

ddg::Ddg graph_of(const std::string& name) {
    return ddg::build_ddg(lang::parse(testsupport::read_corpus_file(name)));
}

int find_node(const ddg::Ddg& graph, const std::string& label) {
    for (const auto& node : graph.nodes) {
        if (node.label == label) return node.id;
    }
    return -1;
}

// Partition/totality invariants shared by every coloring test.
void check_invariants(const ddg::Ddg& graph, const Coloring& coloring) {
    REQUIRE(coloring.assignment.size() == graph.nodes.size());
    for (ColorId c : coloring.assignment) {
        REQUIRE(c >= 0);
        REQUIRE(c < coloring.color_count());
    }
    // Exactly one goal per goal color; no goals in shared colors or main.
    std::map<ColorId, int> goals_in;
    for (int g : graph.goal_order) goals_in[coloring.color_of(g)]++;
    for (ColorId c = 0; c < coloring.color_count(); ++c) {
        if (coloring.is_goal(c)) {
            CHECK(goals_in[c] == 1);
        } else {
            CHECK(goals_in[c] == 0);
        }
    }
}

}  // namespace

TEST_CASE("garden colors into 5 partitions matching the worked example") {
    ddg::Ddg graph = graph_of("garden.src");
    Coloring coloring = color(graph);
    check_invariants(graph, coloring);

    CHECK(coloring.color_count() == 5);
    CHECK(coloring.goal_colors.size() == 3);
    CHECK(coloring.shared_colors.size() == 1);

    ColorId shared = coloring.shared_colors[0];
    std::set<std::string> shared_labels;
    for (const auto& node : graph.nodes) {
        if (coloring.color_of(node.id) == shared) shared_labels.insert(node.label);
    }
    CHECK(shared_labels == std::set<std::string>{"pi", "circle_area"});

    // Sources other than pi stay in main.
    for (const auto& label : {"side_length", "plant_spacing", "soil_depth", "fill_depth"}) {
        CHECK(coloring.color_of(find_node(graph, label)) == kMainColor);
    }

    // circle_area's value is needed across three functions.
    int ca = find_node(graph, "circle_area");
    std::set<ColorId> consumers;
    for (int succ : graph.succs[static_cast<size_t>(ca)]) consumers.insert(coloring.color_of(succ));
    CHECK(consumers.size() == 3);
}

TEST_CASE("single chain: two colors, no sharing") {
    ddg::Ddg graph = ddg::build_ddg(lang::parse("x = input()\ny = x * 2\nprint(y)\n"));
    Coloring coloring = color(graph);
    check_invariants(graph, coloring);
    CHECK(coloring.color_count() == 2);
    CHECK(coloring.shared_colors.empty());
    CHECK(coloring.color_of(find_node(graph, "x")) == kMainColor);
}

TEST_CASE("diamond: the shared middle splits away") {
    const char* src =
        "a = input()\n"
        "b = a + a\n"
        "c = b + 1\n"
        "print(c)\n"
        "d = b + 2\n"
        "print(d)\n";
    ddg::Ddg graph = ddg::build_ddg(lang::parse(src));
    Coloring coloring = color(graph);
    check_invariants(graph, coloring);
    CHECK(coloring.color_count() == 4);  // main, two goal colors, one shared
    REQUIRE(coloring.shared_colors.size() == 1);
    ColorId shared = coloring.shared_colors[0];
    CHECK(coloring.color_of(find_node(graph, "b")) == shared);
    CHECK(coloring.color_of(find_node(graph, "a")) == kMainColor);
    CHECK(coloring.is_goal(coloring.color_of(find_node(graph, "c"))));
    CHECK(coloring.is_goal(coloring.color_of(find_node(graph, "d"))));
}

TEST_CASE("three-way sharing reuses the shared color instead of minting") {
    ddg::Ddg graph = graph_of("garden.src");
    Coloring coloring = color(graph);
    CHECK(coloring.shared_colors.size() == 1);  // one collision, then reuse
}

TEST_CASE("no goals raises") {
    ddg::Ddg graph = ddg::build_ddg(lang::parse("x = 1\ny = x + 2\n"));
    CHECK_THROWS_AS(color(graph), NoGoalsError);
    ddg::Ddg empty = ddg::build_ddg(lang::parse(""));
    CHECK_THROWS_AS(color(empty), NoGoalsError);
}

TEST_CASE("coloring is deterministic") {
    for (const auto& entry : testsupport::corpus_programs()) {
        ddg::Ddg graph = graph_of(entry.name);
        Coloring a = color(graph);
        Coloring b = color(graph);
        CHECK(a.assignment == b.assignment);
        CHECK(a.goal_colors == b.goal_colors);
        CHECK(a.shared_colors == b.shared_colors);
    }
}

TEST_CASE("corpus-wide: colorings satisfy the partition invariants") {
    for (const auto& entry : testsupport::corpus_programs()) {
        ddg::Ddg graph = graph_of(entry.name);
        Coloring coloring = color(graph);
        check_invariants(graph, coloring);
    }
}

TEST_CASE("sharing soundness against the exhaustive reachability oracle") {
    // Brute force on random DAGs: a non-source node is shared iff it
    // reaches two or more distinct goals.
    std::mt19937 rng(123456789);
    int cases = 0;
    while (cases < 1200) {
        testsupport::RandomDag dag = testsupport::random_dag(rng);
        ++cases;
        Coloring coloring = color(dag.graph);
        check_invariants(dag.graph, coloring);
        auto reach = testsupport::reachable_goals(dag.graph);
        for (const auto& node : dag.graph.nodes) {
            ColorId c = coloring.color_of(node.id);
            if (node.kind == ddg::NodeKind::Source) {
                CHECK(c == kMainColor);  // random DAG sources are inputs
                continue;
            }
            size_t reached = reach[static_cast<size_t>(node.id)].size();
            bool shared = coloring.is_shared(c);
            if (node.kind == ddg::NodeKind::Goal) {
                CHECK(coloring.is_goal(c));
                continue;
            }
            if (reached >= 2) {
                CHECK_MESSAGE(shared, "node ", node.id, " reaches ", reached,
                              " goals but holds a non-shared color");
            } else if (reached == 1) {
                CHECK_MESSAGE(!shared, "node ", node.id, " reaches one goal but was shared");
            } else {
                CHECK(c == kMainColor);  // dead nodes land in main
            }
        }
    }
}

TEST_CASE("events fire once per goal and once per collision") {
    ddg::Ddg graph = graph_of("garden.src");
    int goals = 0;
    int collisions = 0;
    color(graph, [&](const ColorEvent& event, const Coloring&) {
        if (event.kind == ColorEvent::Kind::GoalDone) ++goals;
        if (event.kind == ColorEvent::Kind::Collision) ++collisions;
    });
    CHECK(goals == 3);
    CHECK(collisions == 1);
}
