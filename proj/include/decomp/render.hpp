#pragma once

#include <string>
#include <vector>

#include "decomp/coloring.hpp"
#include "decomp/ddg.hpp"
#include "decomp/metrics.hpp"

namespace decomp::report {

enum class OutputFormat { Dot, Json, Markdown };

struct RenderOptions {
    // First entry is reserved for main; goal functions take the following
    // entries in goal order, shared functions the ones after that.
    std::vector<std::string> palette{"gray", "yellow", "purple", "green", "red"};
    bool emphasize_cross_edges = true;
    OutputFormat format = OutputFormat::Dot;
};

// DOT digraph: nodes filled by partition color, sources ranked top, goals
// bottom, cross-partition edges bold black.
std::string render_dot(const ddg::Ddg& graph, const split::Coloring& coloring,
                       const RenderOptions& options = {});

// One DOT frame per processed goal plus one per collision recolor; the last
// frame equals render_dot of the final coloring.
std::vector<std::string> render_frames(const ddg::Ddg& graph, const RenderOptions& options = {});

// Markdown feedback: metric table, findings with line numbers, composite.
std::string render_feedback_md(const metrics::QualityReport& report);

}  // namespace decomp::report
