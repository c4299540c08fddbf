#include "decomp/coloring.hpp"

#include <algorithm>
#include <set>

namespace decomp::split {

using ddg::Ddg;
using ddg::DdgNode;
using ddg::NodeKind;
using ddg::SourceOrigin;

std::vector<ColorId> Coloring::display_order() const {
    std::vector<ColorId> order;
    order.push_back(kMainColor);
    order.insert(order.end(), goal_colors.begin(), goal_colors.end());
    order.insert(order.end(), shared_colors.begin(), shared_colors.end());
    return order;
}

namespace {

class ColorRun {
public:
    ColorRun(const Ddg& graph, const ColorObserver& observer) : graph_(graph), observer_(observer) {
        coloring_.assignment.assign(graph.nodes.size(), -1);
        coloring_.kinds.push_back(ColorKind::Main);
    }

    Coloring run() {
        if (graph_.goal_order.empty()) throw NoGoalsError();
        for (size_t i = 0; i < graph_.goal_order.size(); ++i) {
            int goal = graph_.goal_order[i];
            ColorId c = mint(ColorKind::GoalFunction);
            coloring_.goal_of[c] = goal;
            coloring_.goal_colors.push_back(c);
            coloring_.assignment[static_cast<size_t>(goal)] = c;
            for (int pred : graph_.preds[static_cast<size_t>(goal)]) visit(pred, c);
            bool last = i + 1 == graph_.goal_order.size();
            if (last) {
                finalize();
                compact();
            }
            notify(ColorEvent{ColorEvent::Kind::GoalDone, goal, -1, -1});
        }
        return std::move(coloring_);
    }

private:
    const Ddg& graph_;
    const ColorObserver& observer_;
    Coloring coloring_;

    ColorId mint(ColorKind kind) {
        coloring_.kinds.push_back(kind);
        return static_cast<ColorId>(coloring_.kinds.size() - 1);
    }

    void notify(const ColorEvent& event) {
        if (observer_) observer_(event, coloring_);
    }

    ColorId at(int node) const { return coloring_.assignment[static_cast<size_t>(node)]; }

    void visit(int node, ColorId goal_color) {
        ColorId current = at(node);
        if (current == goal_color) return;
        if (current == -1) {
            coloring_.assignment[static_cast<size_t>(node)] = goal_color;
            for (int pred : graph_.preds[static_cast<size_t>(node)]) visit(pred, goal_color);
            return;
        }
        if (coloring_.is_shared(current)) return;  // reuse the shared function
        // Reached from a second goal: split the node and its not-yet-shared
        // ancestor closure into a fresh shared function.
        ColorId shared = mint(ColorKind::SharedFunction);
        coloring_.shared_root[shared] = node;
        coloring_.shared_colors.push_back(shared);
        recolor_closure(node, shared);
        notify(ColorEvent{ColorEvent::Kind::Collision, coloring_.goal_of[goal_color], node, shared});
    }

    void recolor_closure(int node, ColorId shared) {
        ColorId current = at(node);
        if (current != -1 && coloring_.is_shared(current)) return;
        coloring_.assignment[static_cast<size_t>(node)] = shared;
        for (int pred : graph_.preds[static_cast<size_t>(node)]) {
            if (at(pred) == shared) continue;
            recolor_closure(pred, shared);
        }
    }

    void finalize() {
        // Sources: named constants private to one shared function stay with
        // it; everything else (inputs, dead nodes) belongs to main.
        for (const auto& node : graph_.nodes) {
            if (node.kind != NodeKind::Source) continue;
            ColorId chosen = kMainColor;
            if (node.origin == SourceOrigin::Constant) {
                std::set<ColorId> consumers;
                for (int succ : graph_.succs[static_cast<size_t>(node.id)]) {
                    ColorId c = at(succ);
                    if (c != -1) consumers.insert(c);
                }
                if (consumers.size() == 1 && coloring_.is_shared(*consumers.begin())) {
                    chosen = *consumers.begin();
                }
            }
            coloring_.assignment[static_cast<size_t>(node.id)] = chosen;
        }
        for (const auto& node : graph_.nodes) {
            if (at(node.id) == -1) coloring_.assignment[static_cast<size_t>(node.id)] = kMainColor;
        }
    }

    // Drop colors that ended up empty (a collision on a source mints a
    // shared color that finalize() then drains) and renumber densely.
    void compact() {
        std::vector<int> population(coloring_.kinds.size(), 0);
        for (ColorId c : coloring_.assignment) ++population[static_cast<size_t>(c)];
        std::vector<ColorId> remap(coloring_.kinds.size(), -1);
        std::vector<ColorKind> kinds;
        auto keep = [&](ColorId c) {
            remap[static_cast<size_t>(c)] = static_cast<ColorId>(kinds.size());
            kinds.push_back(coloring_.kinds[static_cast<size_t>(c)]);
        };
        keep(kMainColor);
        for (ColorId c = 1; c < coloring_.color_count(); ++c) {
            if (population[static_cast<size_t>(c)] > 0) keep(c);
        }
        for (auto& c : coloring_.assignment) c = remap[static_cast<size_t>(c)];

        std::map<ColorId, int> goal_of;
        for (const auto& [c, g] : coloring_.goal_of) {
            if (remap[static_cast<size_t>(c)] != -1) goal_of[remap[static_cast<size_t>(c)]] = g;
        }
        std::map<ColorId, int> shared_root;
        for (const auto& [c, n] : coloring_.shared_root) {
            if (remap[static_cast<size_t>(c)] != -1) shared_root[remap[static_cast<size_t>(c)]] = n;
        }
        std::vector<ColorId> goal_colors;
        for (ColorId c : coloring_.goal_colors) {
            if (remap[static_cast<size_t>(c)] != -1) goal_colors.push_back(remap[static_cast<size_t>(c)]);
        }
        std::vector<ColorId> shared_colors;
        for (ColorId c : coloring_.shared_colors) {
            if (remap[static_cast<size_t>(c)] != -1) shared_colors.push_back(remap[static_cast<size_t>(c)]);
        }
        coloring_.kinds = std::move(kinds);
        coloring_.goal_of = std::move(goal_of);
        coloring_.shared_root = std::move(shared_root);
        coloring_.goal_colors = std::move(goal_colors);
        coloring_.shared_colors = std::move(shared_colors);
    }
};

}  // namespace

Coloring color(const ddg::Ddg& graph, const ColorObserver& observer) {
    ColorRun run(graph, observer);
    return run.run();
}

}  // namespace decomp::split
