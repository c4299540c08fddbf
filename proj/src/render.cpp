#include "decomp/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace decomp::report {

using ddg::Ddg;
using ddg::DdgNode;
using ddg::NodeKind;
using split::ColorId;
using split::Coloring;
using split::kMainColor;

namespace {

std::string escape_dot(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

// Generated fallback: evenly spaced hues after the fixed palette runs out.
std::string generated_color(size_t index) {
    double hue = std::fmod(0.61803398875 * static_cast<double>(index + 1), 1.0);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f 0.45 0.92", hue);
    return buf;
}

// Palette slot per color: main first, goal colors in goal order, shared
// colors in mint order. Stable across partial colorings of the same graph,
// so animation frames keep their hues.
std::map<ColorId, std::string> palette_map(const Coloring& coloring, size_t total_goals,
                                           const RenderOptions& options) {
    std::map<ColorId, std::string> out;
    auto pick = [&](size_t slot) {
        return slot < options.palette.size() ? options.palette[slot]
                                             : generated_color(slot - options.palette.size());
    };
    out[kMainColor] = pick(0);
    for (size_t i = 0; i < coloring.goal_colors.size(); ++i) {
        out[coloring.goal_colors[i]] = pick(1 + i);
    }
    for (size_t i = 0; i < coloring.shared_colors.size(); ++i) {
        out[coloring.shared_colors[i]] = pick(1 + total_goals + i);
    }
    return out;
}

std::string render_with(const Ddg& graph, const Coloring& coloring, size_t total_goals,
                        const RenderOptions& options) {
    std::map<ColorId, std::string> palette = palette_map(coloring, total_goals, options);
    std::ostringstream out;
    out << "digraph ddg {\n";
    out << "  rankdir=TB;\n";
    out << "  node [style=filled, fontname=\"Helvetica\"];\n";
    for (const auto& node : graph.nodes) {
        ColorId c = coloring.assignment[static_cast<size_t>(node.id)];
        std::string fill = c < 0 ? "white" : palette.at(c);
        const char* shape = node.kind == NodeKind::Source
                                ? "ellipse"
                                : (node.kind == NodeKind::Goal ? "box" : "oval");
        out << "  n" << node.id << " [label=\"" << escape_dot(node.label) << "\", shape=" << shape
            << ", fillcolor=\"" << escape_dot(fill) << "\"";
        if (!node.tags.empty()) {
            std::string tags;
            for (const auto& tag : node.tags) {
                if (!tags.empty()) tags += ",";
                tags += tag;
            }
            out << ", tooltip=\"" << escape_dot(tags) << "\"";
        }
        out << "];\n";
    }
    std::vector<int> sources;
    std::vector<int> goals;
    for (const auto& node : graph.nodes) {
        if (node.kind == NodeKind::Source) sources.push_back(node.id);
        if (node.kind == NodeKind::Goal) goals.push_back(node.id);
    }
    if (!sources.empty()) {
        out << "  { rank=min;";
        for (int id : sources) out << " n" << id << ";";
        out << " }\n";
    }
    if (!goals.empty()) {
        out << "  { rank=max;";
        for (int id : goals) out << " n" << id << ";";
        out << " }\n";
    }
    for (const auto& [from, to] : graph.edges) {
        ColorId cf = coloring.assignment[static_cast<size_t>(from)];
        ColorId ct = coloring.assignment[static_cast<size_t>(to)];
        bool cross = cf != ct && cf >= 0 && ct >= 0;
        out << "  n" << from << " -> n" << to;
        if (cross && options.emphasize_cross_edges) {
            // Data crossing a boundary must be passed between functions.
            out << " [color=black, penwidth=2.0]";
        } else {
            out << " [color=gray60]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string render_dot(const Ddg& graph, const Coloring& coloring, const RenderOptions& options) {
    return render_with(graph, coloring, coloring.goal_colors.size(), options);
}

std::vector<std::string> render_frames(const Ddg& graph, const RenderOptions& options) {
    std::vector<std::string> frames;
    size_t total_goals = graph.goal_order.size();
    split::color(graph, [&](const split::ColorEvent& event, const Coloring& partial) {
        (void)event;
        frames.push_back(render_with(graph, partial, total_goals, options));
    });
    return frames;
}

std::string render_feedback_md(const metrics::QualityReport& report) {
    std::ostringstream out;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", report.composite);
    out << "# Decomposition feedback\n\n";
    out << "Composite score: **" << buf << "**\n\n";
    if (!report.equivalent) {
        out << "> **Warning:** the submission does not compute the same outputs as the"
               " reference; scores below compare structure only.\n\n";
    }
    out << "| metric | submission | reference | subscore |\n";
    out << "|---|---|---|---|\n";
    auto row = [&](const char* name, int cand, int ref, double score) {
        char s[32];
        std::snprintf(s, sizeof(s), "%.2f", score);
        out << "| " << name << " | " << cand << " | " << ref << " | " << s << " |\n";
    };
    row("global volume", report.candidate.global_volume, report.reference.global_volume,
        report.subscores[0]);
    row("print+return violations", report.candidate.srp_violations, report.reference.srp_violations,
        report.subscores[1]);
    row("information load", report.candidate.info_load, report.reference.info_load,
        report.subscores[2]);
    row("reused utilities", report.candidate.reuse_instances, report.reference.reuse_instances,
        report.subscores[3]);
    out << "\n";
    if (report.findings.empty()) {
        out << "No findings.\n";
    } else {
        out << "## Findings\n\n";
        for (const auto& finding : report.findings) {
            out << "- line " << finding.line << ": [" << finding.metric << "] " << finding.message
                << "\n";
        }
    }
    return out.str();
}

}  // namespace decomp::report
