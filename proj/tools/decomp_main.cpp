#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "decomp/cli.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string weights;
    std::string format;
    int param_threshold = -1;
    int jobs = -1;
    bool frames = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "config file (key=value lines)");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--weights", flags.weights, "metric weights w1,w2,w3,w4");
    cmd->add_option("--param-threshold", flags.param_threshold, "parameter-count finding threshold");
    cmd->add_option("--format", flags.format, "output formats, comma separated (json,dot,md)");
    cmd->add_option("--jobs", flags.jobs, "worker threads for batch");
    cmd->add_flag("--frames", flags.frames, "also write one DOT frame per coloring step");
}

// Flags override the config file; the config file overrides defaults.
decomp::cli::Config resolve_config(const CommonFlags& flags) {
    decomp::cli::Config config;
    std::string path = flags.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("DECOMP_CONFIG")) path = env;
    }
    if (!path.empty()) config = decomp::cli::load_config_file(path);
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (flags.param_threshold >= 0) config.param_threshold = flags.param_threshold;
    if (flags.jobs >= 0) config.jobs = flags.jobs;
    if (flags.frames) config.frames = true;
    if (!flags.weights.empty()) {
        std::string spec = "weights=" + flags.weights;
        decomp::cli::Config parsed = decomp::cli::parse_config_text(spec);
        config.weights = parsed.weights;
    }
    if (!flags.format.empty()) {
        decomp::cli::Config parsed = decomp::cli::parse_config_text("format=" + flags.format);
        config.formats = parsed.formats;
    }
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Procedural decomposition analyzer: dependency-graph coloring,"
                 " extract-function planning, and reference-based scoring"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string input;
    std::string student;
    std::string reference;
    std::string corpus;

    CLI::App* split_cmd = app.add_subcommand("split", "decompose an undecomposed program");
    split_cmd->add_option("file", input, "source file")->required();
    add_common(split_cmd, flags);

    CLI::App* score_cmd = app.add_subcommand("score", "score a submission against a reference");
    score_cmd->add_option("student", student, "submission source file")->required();
    score_cmd->add_option("reference", reference, "expert reference (decomposed or not)")->required();
    add_common(score_cmd, flags);

    CLI::App* batch_cmd = app.add_subcommand("batch", "score a directory of submissions");
    batch_cmd->add_option("dir", corpus, "directory of .src files")->required();
    batch_cmd->add_option("reference", reference, "expert reference (decomposed or not)")->required();
    add_common(batch_cmd, flags);

    CLI::App* dot_cmd = app.add_subcommand("dot", "render the colored dependency graph");
    dot_cmd->add_option("file", input, "source file")->required();
    add_common(dot_cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        decomp::cli::Config config = resolve_config(flags);
        if (split_cmd->parsed()) return decomp::cli::cmd_split(input, config);
        if (score_cmd->parsed()) return decomp::cli::cmd_score(student, reference, config);
        if (batch_cmd->parsed()) return decomp::cli::cmd_batch(corpus, reference, config);
        if (dot_cmd->parsed()) return decomp::cli::cmd_dot(input, config);
    } catch (const decomp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return decomp::cli::kExitDiagnostic;
    }
    return decomp::cli::kExitDiagnostic;
}
