#pragma once

#include <functional>
#include <map>
#include <vector>

#include "decomp/ddg.hpp"

namespace decomp::split {

using ColorId = int;
constexpr ColorId kMainColor = 0;

enum class ColorKind { Main, GoalFunction, SharedFunction };

struct Coloring {
    std::vector<ColorId> assignment;         // node id -> color (-1 while in progress)
    std::vector<ColorKind> kinds;            // color id -> kind
    std::map<ColorId, int> goal_of;          // goal color -> goal node id
    std::map<ColorId, int> shared_root;      // shared color -> first collided node
    std::vector<ColorId> goal_colors;        // in goal order
    std::vector<ColorId> shared_colors;      // in mint order

    int color_count() const { return static_cast<int>(kinds.size()); }
    ColorId color_of(int node) const { return assignment[static_cast<size_t>(node)]; }
    bool is_shared(ColorId c) const { return kinds[static_cast<size_t>(c)] == ColorKind::SharedFunction; }
    bool is_goal(ColorId c) const { return kinds[static_cast<size_t>(c)] == ColorKind::GoalFunction; }

    // Stable display order: main, then goal colors in goal order, then
    // shared colors in mint order.
    std::vector<ColorId> display_order() const;
};

struct ColorEvent {
    enum class Kind { GoalDone, Collision };
    Kind kind;
    int goal_node = -1;       // goal being processed
    int collided_node = -1;   // Collision only
    ColorId new_color = -1;   // Collision: the minted shared color
};

using ColorObserver = std::function<void(const ColorEvent&, const Coloring&)>;

// Backward split: walk each goal's ancestors depth-first, minting a fresh
// shared color when a node already owned by a different goal is reached
// (the node and its not-yet-shared ancestors move to the shared color);
// nodes already shared are reused as-is. Sources then land in main, except
// named constants consumed by exactly one shared function, which stay with
// that function. Throws NoGoalsError when the program prints nothing.
Coloring color(const ddg::Ddg& graph, const ColorObserver& observer = {});

}  // namespace decomp::split
