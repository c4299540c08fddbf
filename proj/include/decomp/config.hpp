#pragma once

#include <set>
#include <string>
#include <vector>

#include "decomp/metrics.hpp"

namespace decomp::cli {

struct Config {
    metrics::Weights weights;
    int param_threshold = 4;
    std::vector<std::string> palette;         // empty: renderer default
    std::string out_dir;                      // empty: alongside the input
    std::set<std::string> formats{"json", "dot", "md"};
    bool frames = false;
    int jobs = 1;

    void validate() const;  // throws ConfigError
};

// key=value lines; '#' comments. Keys: weights (w1,w2,w3,w4),
// param_threshold, palette (comma-separated), out_dir, format
// (comma-separated of json|dot|md), frames (0/1), jobs.
Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

}  // namespace decomp::cli
